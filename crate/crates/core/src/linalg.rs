//! Dense complex linear algebra helpers for the numeric path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Row-major construction from real entries.
pub fn real_matrix(n: usize, m: usize, rows: &[f64]) -> CMat {
    CMat::from_row_iterator(n, m, rows.iter().map(|&x| c(x, 0.0)))
}

pub fn adj(m: &CMat) -> CMat {
    m.adjoint()
}

/// Frobenius norm.
pub fn norm(m: &CMat) -> f64 {
    m.norm()
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// 2-norm condition number; infinite for singular or empty-rank input.
pub fn cond(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    s.iter().filter(|&&x| x > rel_tol * top && x > 0.0).count()
}

/// Solves `m x = rhs` by LU, refusing matrices beyond `cond_cap`.
pub fn solve_checked(m: &CMat, rhs: &CMat, what: &'static str, cond_cap: f64) -> Result<CMat> {
    let k = cond(m);
    if !(k <= cond_cap) {
        return Err(Error::Singular { what, cond: k });
    }
    m.clone().lu().solve(rhs).ok_or(Error::Singular { what, cond: k })
}

pub fn inverse_checked(m: &CMat, what: &'static str, cond_cap: f64) -> Result<CMat> {
    solve_checked(m, &eye(m.nrows()), what, cond_cap)
}

/// Eigendecomposition `h = Q diag(w) Q^†` of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (w, q) = hermitian_eigen(h);
    let n = w.len();
    let d = CMat::from_fn(n, n, |i, j| if i == j { c(f(w[i]), 0.0) } else { c(0.0, 0.0) });
    &q * d * q.adjoint()
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn unitarity_residual(m: &CMat) -> f64 {
    (m.adjoint() * m - eye(m.nrows())).norm()
}

/// Largest modulus among the entries of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
