pub mod bc;
pub mod error;
pub mod field;
pub mod jordan;
pub mod linalg;
pub mod low_energy;
pub mod potential;
pub mod sampling;
pub mod scattering;
pub mod solver;

pub use error::{Error, Result};
