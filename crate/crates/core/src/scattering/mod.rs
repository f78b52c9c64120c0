//! Jost matrix, scattering matrix and the auxiliary matrices `L`, `P`.
//!
//! All Wronskians are evaluated at the anchor `a` of the solver unless a
//! point is given explicitly. With the default anchor `a = x_max` the Jost
//! solution there is exact, so only the regular solution is integrated.

pub mod scalar;
pub mod sweep;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bc::BCPair;
use crate::error::{Error, Result};
use crate::field::{self, GaussQ};
use crate::linalg::{self, adj, c, eye, CMat, I};
use crate::solver::{wronskian, Solver};

/// Largest condition number accepted when inverting `J(k)`.
pub const JOST_COND_CAP: f64 = 1e10;
/// Largest condition number accepted when inverting `f(k, a)` and similar.
pub const SOLUTION_COND_CAP: f64 = 1e10;
/// Relative agreement required between the two evaluations of `J(0)`.
pub const JOST_ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct JostEvaluation {
    pub k: Complex64,
    pub j: CMat,
    pub cond: f64,
}

#[derive(Debug, Clone)]
pub struct SMatrixEvaluation {
    pub k: f64,
    pub s: CMat,
    pub unitarity_residual: f64,
    pub det_j_abs: f64,
}

impl SMatrixEvaluation {
    pub fn new(k: f64, s: CMat, det_j_abs: f64) -> Self {
        let unitarity_residual = linalg::unitarity_residual(&s);
        Self { k, s, unitarity_residual, det_j_abs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogDerivativeMode {
    /// `f'(k, a) f(k, a)^{-1}`.
    Value,
    /// `f(k, a) f'(k, a)^{-1}`.
    Derivative,
}

/// A potential together with a boundary condition.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringProblem<'a> {
    solver: Solver<'a>,
    bc: &'a BCPair,
}

fn reflect(k: Complex64) -> Complex64 {
    -k.conj()
}

impl<'a> ScatteringProblem<'a> {
    pub fn new(solver: Solver<'a>, bc: &'a BCPair) -> Result<Self> {
        if bc.n() != solver.n() {
            return Err(Error::DimensionMismatch(format!(
                "boundary condition has n = {}, potential has n = {}",
                bc.n(),
                solver.n()
            )));
        }
        Ok(Self { solver, bc })
    }

    pub fn solver(&self) -> &Solver<'a> {
        &self.solver
    }

    pub fn bc(&self) -> &'a BCPair {
        self.bc
    }

    pub fn n(&self) -> usize {
        self.bc.n()
    }

    pub fn anchor(&self) -> f64 {
        self.solver.anchor()
    }

    fn check_half_plane(k: Complex64) -> Result<()> {
        if k.im < 0.0 || !(k.re.is_finite() && k.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("k = {k} must satisfy Im k >= 0")));
        }
        Ok(())
    }

    /// `J(k) = [f(-k*, x)^†; phi(k, x)]` evaluated at `x`.
    pub fn jost_matrix_at(&self, k: Complex64, x: f64) -> Result<CMat> {
        Self::check_half_plane(k)?;
        let f = self.solver.jost_solution(reflect(k), x)?;
        let phi = self.solver.regular_solution(self.bc, k, x)?;
        wronskian(&f, &phi, true)
    }

    pub fn jost_matrix(&self, k: Complex64) -> Result<JostEvaluation> {
        let j = self.jost_matrix_at(k, self.anchor())?;
        let cond = linalg::cond(&j);
        Ok(JostEvaluation { k, j, cond })
    }

    /// `J(0)` from the Wronskian, cross-checked against `B + int V phi(0)`.
    pub fn jost_matrix_zero(&self) -> Result<CMat> {
        let zero = c(0.0, 0.0);
        let w = self.jost_matrix_at(zero, self.anchor())?;
        let phi0 = self.solver.regular_solution(self.bc, zero, 0.0)?;
        let integral = self.solver.integrate_v(zero, &phi0, 0.0, self.solver.x_max(), |_| 1.0)?;
        let alt = self.bc.b() + integral;
        let residual = (&w - &alt).norm();
        let tolerance = JOST_ZERO_TOL * w.norm().max(1.0);
        if residual > tolerance {
            return Err(Error::CrossCheck { what: "J(0)", residual, tolerance });
        }
        Ok(w)
    }

    /// `L(k) = f'(-k, 0)^† B E^{-2} + f(-k, 0)^† A E^{-2}` for real `k`.
    pub fn l_matrix(&self, k: f64) -> Result<CMat> {
        let f = self.solver.jost_solution(c(-k, 0.0), 0.0)?;
        let e2 = self.bc.e_inv_sq();
        Ok(adj(&f.deriv) * self.bc.b() * &e2 + adj(&f.value) * self.bc.a() * &e2)
    }

    /// `S(k) = -J(-k) J(k)^{-1}` for real nonzero `k`.
    pub fn smatrix(&self, k: f64) -> Result<SMatrixEvaluation> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("S(k) needs real nonzero k, got {k}")));
        }
        let a = self.anchor();
        let phi = self.solver.regular_solution(self.bc, c(k, 0.0), a)?;
        let f_plus = self.solver.jost_solution(c(k, 0.0), a)?;
        let f_minus = self.solver.jost_solution(c(-k, 0.0), a)?;
        // phi is even in k, so J(-k) reuses it.
        let j = wronskian(&f_minus, &phi, true)?;
        let j_neg = wronskian(&f_plus, &phi, true)?;
        self.s_from_jost(k, &j, &j_neg)
    }

    fn s_from_jost(&self, k: f64, j: &CMat, j_neg: &CMat) -> Result<SMatrixEvaluation> {
        // S = -J(-k) J(k)^{-1}  <=>  J(k)^T S^T = -J(-k)^T
        let st = linalg::solve_checked(&j.transpose(), &(-j_neg.transpose()), "J(k)", JOST_COND_CAP)?;
        let det = j.clone().determinant().norm();
        Ok(SMatrixEvaluation::new(k, st.transpose(), det))
    }

    /// `P(k) = f(0, a)^† f'(k, a) - f'(0, a)^† f(k, a)`.
    pub fn p_matrix(&self, k: Complex64, a: f64) -> Result<CMat> {
        Self::check_half_plane(k)?;
        let f0 = self.solver.jost_solution(c(0.0, 0.0), a)?;
        let fk = self.solver.jost_solution(k, a)?;
        wronskian(&f0, &fk, true)
    }

    pub fn log_derivative(&self, k: Complex64, a: f64, mode: LogDerivativeMode) -> Result<CMat> {
        let f = self.solver.jost_solution(k, a)?;
        let (num, den, what) = match mode {
            LogDerivativeMode::Value => (&f.deriv, &f.value, "f(k, a)"),
            LogDerivativeMode::Derivative => (&f.value, &f.deriv, "f'(k, a)"),
        };
        // num den^{-1} = (den^T \ num^T)^T
        let t = linalg::solve_checked(&den.transpose(), &num.transpose(), what, SOLUTION_COND_CAP)?;
        Ok(t.transpose())
    }

    /// Linear coefficient `i [f(0, a)^{-1}]^† f(0, a)^{-1}` of `f' f^{-1}` at `k = 0`.
    pub fn log_derivative_slope(&self, a: f64) -> Result<CMat> {
        let f0 = self.solver.jost_solution(c(0.0, 0.0), a)?;
        let inv = linalg::inverse_checked(&f0.value, "f(0, a)", SOLUTION_COND_CAP)?;
        Ok(adj(&inv) * &inv * I)
    }

    /// `(T1, T2)` with `J(k) = T1 + T2`; the Wronskian inside `T2` is taken at `x = 0`.
    pub fn jost_decomposition(&self, k: Complex64) -> Result<(CMat, CMat)> {
        Self::check_half_plane(k)?;
        let a = self.anchor();
        let kr = reflect(k);
        let f0 = self.solver.jost_solution(c(0.0, 0.0), a)?;
        let f0_inv = linalg::inverse_checked(&f0.value, "f(0, a)", SOLUTION_COND_CAP)?;
        let phi_a = self.solver.regular_solution(self.bc, k, a)?;
        let p = self.p_matrix(kr, a)?;
        let t1 = -(adj(&p) * &f0_inv * &phi_a.value);

        let omega0 = self.solver.omega_solution(kr, a, 0.0)?;
        let phi0 = self.solver.regular_solution(self.bc, k, 0.0)?;
        let w = wronskian(&omega0, &phi0, true)?;
        let f_a = self.solver.jost_solution(kr, a)?;
        let t2 = adj(&f_a.value) * adj(&f0_inv) * w;
        Ok((t1, t2))
    }

    /// `F(k) = f(0, a)^† [f(-k*, a)^†]^{-1} J(k)`, equal to `J(0) - ik R + o(k)`.
    pub fn normalized_jost(&self, k: Complex64) -> Result<CMat> {
        let a = self.anchor();
        let f0 = self.solver.jost_solution(c(0.0, 0.0), a)?;
        let fr = self.solver.jost_solution(reflect(k), a)?;
        let j = self.jost_matrix_at(k, a)?;
        let inner = linalg::solve_checked(&adj(&fr.value), &j, "f(-k*, a)", SOLUTION_COND_CAP)?;
        Ok(adj(&f0.value) * inner)
    }
}

/// `J(k) = B - ikA` and `S(k) = -(B + ikA)(B - ikA)^{-1}` for `V = 0`.
///
/// The scattering matrix is `None` when `B - ikA` is singular.
pub fn free_closed_forms(bc: &BCPair, k: Complex64) -> (CMat, Option<CMat>) {
    let ika = bc.a() * (I * k);
    let j = bc.b() - &ika;
    let j_neg = bc.b() + &ika;
    let s = linalg::solve_checked(&j.transpose(), &(-j_neg.transpose()), "B - ikA", JOST_COND_CAP)
        .ok()
        .map(|t| t.transpose());
    (j, s)
}

/// Exact `B - ikA` over the Gaussian rationals.
pub fn free_jost_exact(a: &DMatrix<GaussQ>, b: &DMatrix<GaussQ>, k: &GaussQ) -> DMatrix<GaussQ> {
    let ik = GaussQ::new(-k.im.clone(), k.re.clone());
    b - field::scale(a, &ik)
}

/// Exact `-(B + ikA)(B - ikA)^{-1}`, or `None` if `B - ikA` is singular.
pub fn free_smatrix_exact(a: &DMatrix<GaussQ>, b: &DMatrix<GaussQ>, k: &GaussQ) -> Option<DMatrix<GaussQ>> {
    let j = free_jost_exact(a, b, k);
    let j_neg = free_jost_exact(a, b, &(-k.clone()));
    let inv = field::inverse(&j, 0.0)?;
    Some(-(j_neg * inv))
}

/// Relative residual of `J L^† - L J^† = -2ik I`.
pub fn jl_identity_residual(j: &CMat, l: &CMat, k: f64) -> f64 {
    let n = j.nrows();
    let lhs = j * adj(l) - l * adj(j);
    let rhs = eye(n) * c(0.0, -2.0 * k);
    (lhs - rhs).norm() / (j.norm() * l.norm()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, real_matrix};
    use crate::potential::Potential;
    use crate::solver::SolverConfig;

    fn example_71() -> BCPair {
        BCPair::new(
            real_matrix(3, 3, &[1.0, 0.0, -2.0, -1.0, 1.0, 0.0, 0.0, -1.0, 0.0]),
            real_matrix(3, 3, &[0.0, 0.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0, -1.0]),
        )
        .unwrap()
    }

    #[test]
    fn free_jost_matches_closed_form() {
        let bc = example_71();
        let pot = Potential::zero(3);
        let solver = Solver::new(&pot, SolverConfig::default()).unwrap();
        let prob = ScatteringProblem::new(solver, &bc).unwrap();
        for k in [c(1.0, 0.0), c(0.0, 0.5), c(0.3, 0.2)] {
            let j = prob.jost_matrix(k).unwrap().j;
            assert!(max_abs_diff(&j, &free_closed_forms(&bc, k).0) < 1e-14);
        }
    }

    #[test]
    fn example_71_entry() {
        let bc = example_71();
        let (j, s) = free_closed_forms(&bc, c(1.0, 0.0));
        assert_eq!(j[(0, 2)], c(-1.0, 2.0));
        let s = s.unwrap();
        let expected = (I + 2.0) / (I * 3.0 + 2.0);
        assert!((s[(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn neumann_and_dirichlet_free_scalars() {
        let pot = Potential::zero(1);
        let solver = Solver::new(&pot, SolverConfig::default()).unwrap();
        let n = BCPair::neumann(1);
        let s = ScatteringProblem::new(solver, &n).unwrap().smatrix(0.7).unwrap();
        assert!((s.s[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let d = BCPair::dirichlet(1);
        let p = ScatteringProblem::new(solver, &d).unwrap();
        assert!((p.jost_matrix(c(0.7, 0.0)).unwrap().j[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((p.smatrix(0.7).unwrap().s[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn smatrix_rejects_zero() {
        let pot = Potential::zero(1);
        let solver = Solver::new(&pot, SolverConfig::default()).unwrap();
        let bc = BCPair::dirichlet(1);
        assert!(ScatteringProblem::new(solver, &bc).unwrap().smatrix(0.0).is_err());
    }

    #[test]
    fn exact_free_forms() {
        let a = DMatrix::from_fn(1, 1, |_, _| field::gq(0, 0, 1));
        let b = DMatrix::from_fn(1, 1, |_, _| field::gq(-1, 0, 1));
        let s = free_smatrix_exact(&a, &b, &field::gq(3, 0, 1)).unwrap();
        assert_eq!(s[(0, 0)], field::gq(-1, 0, 1));
    }
}
