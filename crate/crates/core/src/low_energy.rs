//! Zero-energy limit of the scattering matrix in the exceptional case.
//!
//! With `J(0) = S Jordan S^{-1}` and `R = f(0, a)^{-1} phi(0, a)`, the matrix
//! `P2 S^{-1} R S P1` is split after row and column `mu`; its blocks give
//! `A1`, `B1`, `C1` and
//! `S(0) = S P2^T [[I, 0], [2 C1 A1^{-1}, -I]] P2 S^{-1}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{self, Field, GaussQ};
use crate::jordan::{self, ChainOrder, JordanData, JordanMode, JordanOptions};
use crate::linalg::{self, adj, c, CMat};
use crate::scattering::{SMatrixEvaluation, ScatteringProblem, SOLUTION_COND_CAP};

/// Largest condition number accepted for `A1`.
pub const A1_COND_CAP: f64 = 1e10;
/// Relative tolerance for kernel membership.
pub const KERNEL_TOL: f64 = 1e-8;

/// 1-based positions `(q, sigma)` of the column and row permutations.
pub fn permutation_indices(chain_lengths: &[usize], mu: usize) -> (Vec<usize>, Vec<usize>) {
    let zero = &chain_lengths[..mu];
    let starts: Vec<usize> = zero
        .iter()
        .scan(0, |acc, &l| {
            let s = *acc;
            *acc += l;
            Some(s)
        })
        .collect();
    let mut q: Vec<usize> = starts.iter().map(|s| s + 1).collect();
    let mut sigma: Vec<usize> = starts.iter().zip(zero).map(|(s, l)| s + l).collect();
    for (alpha, &len) in zero.iter().enumerate() {
        for j in 2..=len {
            // column of u_{alpha j}, row of u_{alpha (j-1)}
            q.push(starts[alpha] + j);
            sigma.push(starts[alpha] + j - 1);
        }
    }
    (q, sigma)
}

/// `P1 = diag(Pi1, I)` with columns `e_{q_j}`, `P2 = diag(Pi2, I)` with rows `e_{sigma_k}^†`.
pub fn build_permutations<T: Field>(jd: &JordanData<T>) -> (DMatrix<T>, DMatrix<T>) {
    let n = jd.n();
    let lens: Vec<usize> = jd.chains.iter().map(|c| c.len).collect();
    let (q, sigma) = permutation_indices(&lens, jd.mu);
    let mut p1 = field::identity::<T>(n);
    let mut p2 = field::identity::<T>(n);
    for j in 0..jd.nu {
        p1[(j, j)] = T::zero();
        p2[(j, j)] = T::zero();
    }
    for (j, &qj) in q.iter().enumerate() {
        p1[(qj - 1, j)] = T::one();
    }
    for (k, &sk) in sigma.iter().enumerate() {
        p2[(k, sk - 1)] = T::one();
    }
    (p1, p2)
}

#[derive(Debug, Clone)]
pub struct ZBlocks<T: Field> {
    pub a1: DMatrix<T>,
    pub b1: DMatrix<T>,
    pub c1: DMatrix<T>,
    pub d0: DMatrix<T>,
}

fn neg_i<T: Field>(m: DMatrix<T>) -> DMatrix<T> {
    field::scale(&m, &(-T::imag_unit()))
}

fn checked_inverse<T: Field>(m: &DMatrix<T>, what: &'static str, cap: f64) -> Result<DMatrix<T>> {
    if m.is_empty() {
        return Ok(m.clone());
    }
    let k = linalg::cond(&field::to_c64_matrix(m));
    if !(k <= cap) {
        return Err(Error::Singular { what, cond: k });
    }
    let tol = if T::EXACT { 0.0 } else { f64::EPSILON * field::max_magnitude(m) };
    field::inverse(m, tol).ok_or(Error::Singular { what, cond: k })
}

/// Blocks of `-i P2 S^{-1} R S P1` and the constant block `D0`.
pub fn z_blocks<T: Field>(jd: &JordanData<T>, r: &DMatrix<T>, p1: &DMatrix<T>, p2: &DMatrix<T>) -> Result<ZBlocks<T>> {
    let n = jd.n();
    let mu = jd.mu;
    let mt = p2 * &jd.sinv * r * &jd.smat * p1;
    let a1 = neg_i(mt.view((0, 0), (mu, mu)).into_owned());
    let b1 = neg_i(mt.view((0, mu), (mu, n - mu)).into_owned());
    let c1 = neg_i(mt.view((mu, 0), (n - mu, mu)).into_owned());
    checked_inverse(&a1, "A1", A1_COND_CAP)?;

    let mut d0 = DMatrix::<T>::zeros(n - mu, n - mu);
    for i in 0..jd.nu - mu {
        d0[(i, i)] = T::one();
    }
    let full = jd.jordan_matrix();
    let tail = n - jd.nu;
    d0.view_mut((jd.nu - mu, jd.nu - mu), (tail, tail)).copy_from(&full.view((jd.nu, jd.nu), (tail, tail)));
    Ok(ZBlocks { a1, b1, c1, d0 })
}

/// Block inverse of `[[A, B], [C, D]]` through the Schur complement of `D`.
pub fn schur_inverse<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>, c: &DMatrix<T>, d: &DMatrix<T>) -> Result<DMatrix<T>> {
    let p = a.nrows();
    let q = d.nrows();
    if a.ncols() != p || b.shape() != (p, q) || c.shape() != (q, p) || d.ncols() != q {
        return Err(Error::DimensionMismatch("inconsistent block shapes".into()));
    }
    let d_inv = checked_inverse(d, "D", A1_COND_CAP)?;
    let schur = a - b * &d_inv * c;
    let s_inv = checked_inverse(&schur, "Schur complement", A1_COND_CAP)?;
    let top_right = -(&s_inv * b * &d_inv);
    let bottom_left = -(&d_inv * c * &s_inv);
    let bottom_right = &d_inv * c * &s_inv * b * &d_inv + &d_inv;
    let mut out = DMatrix::<T>::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(&s_inv);
    out.view_mut((0, p), (p, q)).copy_from(&top_right);
    out.view_mut((p, 0), (q, p)).copy_from(&bottom_left);
    out.view_mut((p, p), (q, q)).copy_from(&bottom_right);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LowEnergyExpansion<T: Field> {
    pub p1: DMatrix<T>,
    pub p2: DMatrix<T>,
    pub r: DMatrix<T>,
    pub a1: DMatrix<T>,
    pub b1: DMatrix<T>,
    pub c1: DMatrix<T>,
    pub d0: DMatrix<T>,
    pub s0: DMatrix<T>,
}

impl<T: Field> LowEnergyExpansion<T> {
    pub fn to_c64(&self) -> LowEnergyExpansion<Complex64> {
        let m = field::to_c64_matrix;
        LowEnergyExpansion {
            p1: m(&self.p1),
            p2: m(&self.p2),
            r: m(&self.r),
            a1: m(&self.a1),
            b1: m(&self.b1),
            c1: m(&self.c1),
            d0: m(&self.d0),
            s0: m(&self.s0),
        }
    }
}

/// Full expansion from a Jordan decomposition of `J(0)` and the matching `R`.
pub fn expansion<T: Field>(jd: &JordanData<T>, r: &DMatrix<T>) -> Result<LowEnergyExpansion<T>> {
    let n = jd.n();
    let mu = jd.mu;
    let (p1, p2) = build_permutations(jd);
    let blocks = z_blocks(jd, r, &p1, &p2)?;
    let a1_inv = checked_inverse(&blocks.a1, "A1", A1_COND_CAP)?;
    let two = T::one() + T::one();
    let mut mid = DMatrix::<T>::zeros(n, n);
    for i in 0..mu {
        mid[(i, i)] = T::one();
    }
    for i in mu..n {
        mid[(i, i)] = -T::one();
    }
    let lower = field::scale(&(&blocks.c1 * &a1_inv), &two);
    mid.view_mut((mu, 0), (n - mu, mu)).copy_from(&lower);
    let s0 = &jd.smat * p2.transpose() * mid * &p2 * &jd.sinv;
    Ok(LowEnergyExpansion { p1, p2, r: r.clone(), a1: blocks.a1, b1: blocks.b1, c1: blocks.c1, d0: blocks.d0, s0 })
}

/// Leading term of `J(k)^{-1}`: the `1/k` residue when `mu > 0` (order 1),
/// otherwise `J(0)^{-1}` (order 0).
pub fn jost_inverse_asymptotics<T: Field>(
    exp: &LowEnergyExpansion<T>,
    jd: &JordanData<T>,
) -> Result<(DMatrix<T>, u32)> {
    let n = jd.n();
    let mu = jd.mu;
    if mu == 0 {
        return Ok((checked_inverse(&jd.m, "J(0)", A1_COND_CAP)?, 0));
    }
    let a1_inv = checked_inverse(&exp.a1, "A1", A1_COND_CAP)?;
    let mut mid = DMatrix::<T>::zeros(n, n);
    mid.view_mut((0, 0), (mu, mu)).copy_from(&a1_inv);
    Ok((&jd.smat * &exp.p1 * mid * &exp.p2 * &jd.sinv, 1))
}

/// `R = f(0, a)^{-1} phi(0, a)`.
pub fn r_matrix(prob: &ScatteringProblem<'_>) -> Result<CMat> {
    let a = prob.anchor();
    let s = prob.solver();
    let f0 = s.jost_solution(c(0.0, 0.0), a)?;
    let phi = s.regular_solution(prob.bc(), c(0.0, 0.0), a)?;
    linalg::solve_checked(&f0.value, &phi.value, "f(0, a)", SOLUTION_COND_CAP)
}

/// `Z(k) = P2 S^{-1} F(k) S P1`.
pub fn z_of_k(
    prob: &ScatteringProblem<'_>,
    k: Complex64,
    jd: &JordanData<Complex64>,
    p1: &CMat,
    p2: &CMat,
) -> Result<CMat> {
    let f = prob.normalized_jost(k)?;
    Ok(p2 * &jd.sinv * f * &jd.smat * p1)
}

/// Magnitude of the terms whose cancellation produces `J(0)`.
pub fn cancellation_scale(prob: &ScatteringProblem<'_>) -> Result<f64> {
    let f = prob.solver().jost_solution(c(0.0, 0.0), 0.0)?;
    let bc = prob.bc();
    // Both terms carry the propagation error of the full state, even when one of them is small.
    let state = f.value.norm() + f.deriv.norm();
    Ok((state * (bc.a().norm() + bc.b().norm())).max(f64::MIN_POSITIVE))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowEnergyOptions {
    pub mode: JordanMode,
    pub order: ChainOrder,
}

impl Default for LowEnergyOptions {
    fn default() -> Self {
        Self { mode: JordanMode::Numeric, order: ChainOrder::default() }
    }
}

/// Numeric view of a zero-energy computation.
#[derive(Debug, Clone)]
pub struct ZeroEnergyResult {
    pub mode: JordanMode,
    pub jordan: JordanData<Complex64>,
    pub expansion: LowEnergyExpansion<Complex64>,
    pub s0: SMatrixEvaluation,
    pub involution_residual: f64,
    /// Exact `S(0)` when computed over the Gaussian rationals.
    pub s0_exact: Option<DMatrix<GaussQ>>,
}

fn numeric_view(jd: &JordanData<GaussQ>) -> JordanData<Complex64> {
    JordanData {
        m: field::to_c64_matrix(&jd.m),
        smat: field::to_c64_matrix(&jd.smat),
        sinv: field::to_c64_matrix(&jd.sinv),
        chains: jd.chains.iter().map(|c| jordan::Chain { lambda: c.lambda.to_c64(), len: c.len }).collect(),
        mu: jd.mu,
        nu: jd.nu,
        kappa: jd.kappa,
        mode: jd.mode,
    }
}

fn exact_matrix(m: &CMat) -> Result<DMatrix<GaussQ>> {
    let mut out = DMatrix::<GaussQ>::zeros(m.nrows(), m.ncols());
    for (o, z) in out.iter_mut().zip(m.iter()) {
        *o = field::gq_from_c64(*z).ok_or_else(|| Error::InvalidArgument("non-finite entry".into()))?;
    }
    Ok(out)
}

/// Exact Jordan data and expansion for `V = 0`, where `J(0) = B` and `R = A + aB`.
pub fn s_zero_exact(
    prob: &ScatteringProblem<'_>,
    order: ChainOrder,
) -> Result<(JordanData<GaussQ>, LowEnergyExpansion<GaussQ>)> {
    if !prob.solver().potential().is_zero() {
        return Err(Error::InvalidArgument("exact mode requires V = 0; use numeric mode".into()));
    }
    let a = exact_matrix(prob.bc().a())?;
    let b = exact_matrix(prob.bc().b())?;
    let anchor = field::gq_from_c64(c(prob.anchor(), 0.0)).expect("finite anchor");
    let r = &a + field::scale(&b, &anchor);
    let jd = jordan::jordan_form_exact(&b, order)?;
    let exp = expansion(&jd, &r)?;
    Ok((jd, exp))
}

pub fn s_zero(prob: &ScatteringProblem<'_>, opts: LowEnergyOptions) -> Result<ZeroEnergyResult> {
    let (jordan, expansion, s0_exact) = match opts.mode {
        JordanMode::Exact => {
            let (jd, exp) = s_zero_exact(prob, opts.order)?;
            let s0 = exp.s0.clone();
            (numeric_view(&jd), exp.to_c64(), Some(s0))
        }
        JordanMode::Numeric => {
            let j0 = prob.jost_matrix_zero()?;
            let r = r_matrix(prob)?;
            let scale = cancellation_scale(prob)?.max(j0.norm());
            let jd = jordan::jordan_form_numeric(&j0, &JordanOptions::scaled(scale).with_order(opts.order))?;
            let exp = expansion(&jd, &r)?;
            (jd, exp, None)
        }
    };
    let n = prob.n();
    let s = expansion.s0.clone();
    let involution_residual = (&s * &s - linalg::eye(n)).norm();
    let det = jordan.m.clone().determinant().norm();
    Ok(ZeroEnergyResult {
        mode: opts.mode,
        jordan,
        expansion,
        s0: SMatrixEvaluation::new(0.0, s, det),
        involution_residual,
        s0_exact,
    })
}

/// `xi = f(0, a)^{-1} phi(0, a) u` for `u` in the kernel of `J(0)`.
pub fn kernel_bijection(prob: &ScatteringProblem<'_>, u: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let j0 = prob.jost_matrix_zero()?;
    let scale = cancellation_scale(prob)?.max(j0.norm()).max(1.0);
    let residual = (&j0 * u).norm();
    if residual > KERNEL_TOL * scale * u.norm() {
        return Err(Error::NotInKernel { residual });
    }
    Ok(r_matrix(prob)? * u)
}

#[derive(Debug, Clone)]
pub struct KernelCharacterization {
    pub in_kernel: bool,
    /// `phi'(0, x_max) u`, the limit of `phi'(0, x) u` at infinity.
    pub phi_prime_limit: DVector<Complex64>,
    /// Whether `phi(0, x) u` stays bounded on the sampled points beyond `x_max`.
    pub bounded: bool,
}

/// Far sample point used for the boundedness test.
const FAR: f64 = 1e4;

pub fn kernel_characterization(prob: &ScatteringProblem<'_>, u: &DVector<Complex64>) -> Result<KernelCharacterization> {
    let s = prob.solver();
    let xm = s.x_max();
    let zero = c(0.0, 0.0);
    let phi = s.regular_solution(prob.bc(), zero, xm)?;
    let scale = cancellation_scale(prob)?.max(1.0) * u.norm().max(f64::MIN_POSITIVE);
    let limit = &phi.deriv * u;
    let in_kernel = limit.norm() <= KERNEL_TOL * scale;
    let near = (&phi.value * u).norm();
    let far_state = s.propagate(zero, &phi, xm + FAR)?;
    let far = (&far_state.value * u).norm();
    let bounded = (far - near).abs() <= KERNEL_TOL * scale * FAR;
    Ok(KernelCharacterization { in_kernel, phi_prime_limit: limit, bounded })
}

/// Residual of `J(0)^† xi = 0`.
pub fn adjoint_kernel_residual(j0: &CMat, xi: &DVector<Complex64>) -> f64 {
    (adj(j0) * xi).norm()
}
