//! Scalar Jost function and scattering matrix for separated conditions.
//!
//! For `cos(theta) psi(0) + sin(theta) psi'(0) = 0` the Jost function is
//! `-i [f'(k, 0) + cot(theta) f(k, 0)]` for `theta` in `(0, pi)` and
//! `f(k, 0)` for `theta = pi`. The matrix scattering matrix of the same
//! condition equals `S_theta` for `theta < pi` and `-S_theta` for `theta = pi`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::c;
use crate::solver::Solver;

fn check(solver: &Solver<'_>, theta: f64) -> Result<()> {
    if solver.n() != 1 {
        return Err(Error::DimensionMismatch(format!("scalar API needs n = 1, got {}", solver.n())));
    }
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::AngleOutOfRange { index: 0, theta });
    }
    Ok(())
}

pub fn jost_function(solver: &Solver<'_>, theta: f64, k: Complex64) -> Result<Complex64> {
    check(solver, theta)?;
    let f = solver.jost_solution(k, 0.0)?;
    let (f0, f1) = (f.value[(0, 0)], f.deriv[(0, 0)]);
    Ok(if theta == PI { f0 } else { -Complex64::i() * (f1 + f0 / theta.tan()) })
}

pub fn scattering(solver: &Solver<'_>, theta: f64, k: f64) -> Result<Complex64> {
    let ratio = jost_function(solver, theta, c(-k, 0.0))? / jost_function(solver, theta, c(k, 0.0))?;
    Ok(if theta == PI { ratio } else { -ratio })
}

/// Sign relating the matrix scattering matrix to the scalar one.
pub fn matrix_sign(theta: f64) -> f64 {
    if theta == PI {
        -1.0
    } else {
        1.0
    }
}
