//! Propagation of `psi'' = (V - k^2) psi` across one constant segment.
//!
//! The state is the stacked `2n x n` matrix `[psi; psi']`. Segments where
//! `V = 0` use the exact free transfer; the others use Dormand-Prince 5(4).
//! The system is autonomous on a segment, so the stage nodes are not needed.

use num_complex::Complex64;

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::CMat;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// `(cos z, sin z / z)`, with a series for small `|z|`.
pub fn cos_sinc(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        let sinc = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
        let cos = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
        (cos, sinc)
    } else {
        (z.cos(), z.sin() / z)
    }
}

/// Exact transfer over a zero-potential segment of signed length `h`.
pub fn free_transfer(k: Complex64, y: &CMat, h: f64) -> CMat {
    let n = y.ncols();
    let (cos, sinc) = cos_sinc(k * h);
    // sin(kh) / k = h sinc(kh); k sin(kh) = k^2 h sinc(kh)
    let s_over_k = sinc * h;
    let k_sin = k * k * h * sinc;
    let psi = y.rows(0, n);
    let dpsi = y.rows(n, n);
    let mut out = CMat::zeros(2 * n, n);
    out.rows_mut(0, n).copy_from(&(psi * cos + dpsi * s_over_k));
    out.rows_mut(n, n).copy_from(&(dpsi * cos - psi * k_sin));
    out
}

fn rhs(m: &CMat, y: &CMat) -> CMat {
    let n = y.ncols();
    let mut out = CMat::zeros(2 * n, n);
    out.rows_mut(0, n).copy_from(&y.rows(n, n));
    out.rows_mut(n, n).copy_from(&(m * y.rows(0, n)));
    out
}

fn error_norm(err: &CMat, y0: &CMat, y1: &CMat, cfg: &SolverConfig) -> f64 {
    err.iter()
        .zip(y0.iter().zip(y1.iter()))
        .map(|(e, (a, b))| e.norm() / (cfg.abs_tol + cfg.rel_tol * a.norm().max(b.norm())))
        .fold(0.0, f64::max)
}

/// Integrates `y' = [psi'; M psi]` with `M = V - k^2` from `x0` to `x1`.
pub fn dopri(m: &CMat, y: &CMat, x0: f64, x1: f64, cfg: &SolverConfig) -> Result<CMat> {
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y.clone());
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y.clone();
    let mut h = span.abs().min(cfg.max_step);
    let mut k1 = rhs(m, &y);
    let mut stages: Vec<CMat> = Vec::with_capacity(7);
    loop {
        let remaining = (x1 - x).abs();
        if remaining <= 1e-15 * x1.abs().max(1.0) {
            return Ok(y);
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;
        if h < 1e-13 * x.abs().max(1.0) {
            return Err(Error::StepUnderflow { x, target: x1 });
        }

        stages.clear();
        stages.push(k1.clone());
        for i in 1..7 {
            let mut yi = y.clone();
            for (j, kj) in stages.iter().enumerate() {
                let a = A[i][j];
                if a != 0.0 {
                    yi += kj * Complex64::new(a * hs, 0.0);
                }
            }
            stages.push(rhs(m, &yi));
        }
        let mut y5 = y.clone();
        let mut err = CMat::zeros(y.nrows(), y.ncols());
        for (i, ki) in stages.iter().enumerate() {
            if B5[i] != 0.0 {
                y5 += ki * Complex64::new(B5[i] * hs, 0.0);
            }
            let d = B5[i] - B4[i];
            if d != 0.0 {
                err += ki * Complex64::new(d * hs, 0.0);
            }
        }
        let e = error_norm(&err, &y, &y5, cfg);
        if !e.is_finite() {
            h *= MIN_FACTOR;
            continue;
        }
        if e <= 1.0 {
            x = if last { x1 } else { x + hs };
            y = y5;
            k1 = stages[6].clone();
            if last {
                return Ok(y);
            }
        }
        let factor = if e == 0.0 { MAX_FACTOR } else { (SAFETY * e.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
        h = (h * factor).min(cfg.max_step);
    }
}
