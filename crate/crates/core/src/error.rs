use thiserror::Error;

use crate::bc::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundaryCondition(ValidationReport),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("angle {theta} at index {index} lies outside (0, pi]")]
    AngleOutOfRange { index: usize, theta: f64 },

    #[error("{what} is numerically singular (condition {cond:.3e})")]
    Singular { what: &'static str, cond: f64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("step size underflow at x = {x} while propagating towards {target}")]
    StepUnderflow { x: f64, target: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("wronskian operands evaluated at different points ({0} vs {1})")]
    MismatchedPoints(f64, f64),

    #[error("cross-check failed for {what}: residual {residual:.3e} exceeds {tolerance:.1e}")]
    CrossCheck { what: &'static str, residual: f64, tolerance: f64 },

    #[error("jordan structure is ambiguous: eigenvalue gap {gap:.3e} is close to the clustering radius {radius:.3e}")]
    JordanAmbiguous { gap: f64, radius: f64 },

    #[error("jordan decomposition failed: {0}")]
    Jordan(String),

    #[error("eigenvalues are not gaussian rationals; use numeric mode")]
    NotGaussianRational,

    #[error("vector is not in the kernel of J(0) (residual {residual:.3e})")]
    NotInKernel { residual: f64 },
}
