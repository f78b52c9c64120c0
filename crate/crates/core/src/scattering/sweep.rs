//! Scattering matrix on a grid of real momenta.

use rayon::prelude::*;

use super::{SMatrixEvaluation, ScatteringProblem};
use crate::error::Result;

/// `steps` equally spaced points from `k_min` to `k_max` inclusive.
pub fn linear_grid(k_min: f64, k_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![k_min],
        _ => (0..steps)
            .map(|i| if i + 1 == steps { k_max } else { k_min + (k_max - k_min) * i as f64 / (steps - 1) as f64 })
            .collect(),
    }
}

/// Evaluates `S(k)` for every `k` in parallel; results keep the input order.
pub fn sweep(problem: &ScatteringProblem<'_>, ks: &[f64]) -> Vec<Result<SMatrixEvaluation>> {
    ks.par_iter().map(|&k| problem.smatrix(k)).collect()
}
