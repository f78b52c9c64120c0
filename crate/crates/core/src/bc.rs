//! Selfadjoint boundary conditions at the origin.
//!
//! A boundary condition is stored as the pair `(A, B)` of the form
//! `-B^† psi(0) + A^† psi'(0) = 0` with `A^† B` selfadjoint and
//! `A^† A + B^† B` positive definite. The other formulations (a rank
//! condition on `[A1 B1]`, a unitary matrix `U`, a unitary block matrix,
//! separated angles) convert into this one and back.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, adj, c, eye, CMat, I};

/// Relative residual accepted for matrix identities.
pub const EPS_CHECK: f64 = 1e-10;
/// Relative threshold on the smallest eigenvalue of `A^†A + B^†B`.
pub const EPS_POSDEF: f64 = 1e-10;
/// Relative singular-value threshold used for rank decisions.
pub const EPS_RANK: f64 = 1e-10;
/// Largest condition number accepted for a gauge matrix.
pub const GAUGE_COND_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// `A1 psi(0) + B1 psi'(0) = 0` with `A1 B1^†` selfadjoint and `rank[A1 B1] = n`.
    KostrykinAb,
    /// Pair generated from a unitary matrix.
    HarmerUnitary,
    /// The `(A, B)` form used throughout the crate.
    GeneralAb,
    /// `(A, B)` with `A^†A + B^†B = I`.
    Normalized,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::KostrykinAb => "kostrykin_ab",
            Formulation::HarmerUnitary => "harmer_unitary",
            Formulation::GeneralAb => "general_ab",
            Formulation::Normalized => "normalized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "kostrykin_ab" => Some(Formulation::KostrykinAb),
            "harmer_unitary" => Some(Formulation::HarmerUnitary),
            "general_ab" => Some(Formulation::GeneralAb),
            "normalized" => Some(Formulation::Normalized),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `A^† B` selfadjoint.
    Selfadjoint,
    /// `A^† A + B^† B` positive definite.
    PositiveDefinite,
    /// `A1 B1^†` selfadjoint.
    KostrykinSymmetric,
    /// `rank [A1 B1] = n`.
    KostrykinRank,
    /// The block matrix `[[B, A], [A, -B]]` is unitary.
    NormalizedUnitary,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Selfadjoint => "selfadjoint",
            Rule::PositiveDefinite => "positive_definite",
            Rule::KostrykinSymmetric => "kostrykin_symmetric",
            Rule::KostrykinRank => "kostrykin_rank",
            Rule::NormalizedUnitary => "normalized_unitary",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, rule: Rule, residual: f64, bad: bool) {
        if bad {
            self.violations.push(Violation { rule, residual });
        }
    }

    fn into_result(self) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(Error::InvalidBoundaryCondition(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> =
            self.violations.iter().map(|v| format!("{} (residual {:.3e})", v.rule.id(), v.residual)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn check_square_pair(a: &CMat, b: &CMat) -> Result<usize> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n || b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "expected two square matrices of equal size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(n)
}

fn relative(residual: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        residual / scale
    } else {
        residual
    }
}

/// Checks `A^† B = B^† A` and `A^† A + B^† B > 0`.
///
/// Residuals are relative: the selfadjointness defect is divided by
/// `|A| |B|`, and the positivity measure is `lambda_min / lambda_max`.
pub fn validate_ab(a: &CMat, b: &CMat) -> Result<ValidationReport> {
    check_square_pair(a, b)?;
    let mut report = ValidationReport::default();

    let skew = adj(a) * b - adj(b) * a;
    let r = relative(skew.norm(), a.norm() * b.norm());
    report.check(Rule::Selfadjoint, r, r > EPS_CHECK);

    let gram = adj(a) * a + adj(b) * b;
    let (w, _) = linalg::hermitian_eigen(&gram);
    let hi = w.iter().copied().fold(0.0, f64::max);
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    report.check(Rule::PositiveDefinite, ratio, !(ratio > EPS_POSDEF));
    Ok(report)
}

/// Checks `A1 B1^† = B1 A1^†` and `rank [A1 B1] = n`.
pub fn validate_kostrykin(a1: &CMat, b1: &CMat) -> Result<ValidationReport> {
    let n = check_square_pair(a1, b1)?;
    let mut report = ValidationReport::default();

    let skew = a1 * adj(b1) - b1 * adj(a1);
    let r = relative(skew.norm(), a1.norm() * b1.norm());
    report.check(Rule::KostrykinSymmetric, r, r > EPS_CHECK);

    let mut wide = CMat::zeros(n, 2 * n);
    wide.view_mut((0, 0), (n, n)).copy_from(a1);
    wide.view_mut((0, n), (n, n)).copy_from(b1);
    let rank = linalg::numerical_rank(&wide, EPS_RANK);
    report.check(Rule::KostrykinRank, (n - rank) as f64, rank < n);
    Ok(report)
}

fn normalized_block(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(b);
    m.view_mut((0, n), (n, n)).copy_from(a);
    m.view_mut((n, 0), (n, n)).copy_from(a);
    m.view_mut((n, n), (n, n)).copy_from(&(-b));
    m
}

/// Unitarity defect of the block matrix `[[B, A], [A, -B]]`.
pub fn normalized_residual(a: &CMat, b: &CMat) -> f64 {
    linalg::unitarity_residual(&normalized_block(a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `A = (U + I)/2`, `B = i (U - I)/2`.
    Harmer,
    /// `A = i (U - U^†)/2`, `B = (U + U^†)/2`.
    CosineSine,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Harmer => "harmer",
            Convention::CosineSine => "cosine_sine",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "harmer" => Some(Convention::Harmer),
            "cosine_sine" => Some(Convention::CosineSine),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct UnitaryBC {
    u: CMat,
    convention: Convention,
}

impl UnitaryBC {
    pub fn new(u: CMat, convention: Convention) -> Result<Self> {
        if u.nrows() == 0 || !u.is_square() {
            return Err(Error::DimensionMismatch(format!("U must be square, got {:?}", u.shape())));
        }
        let residual = linalg::unitarity_residual(&u);
        if residual > EPS_CHECK * (u.nrows() as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { u, convention })
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

#[derive(Debug, Clone)]
pub struct BCPair {
    a: CMat,
    b: CMat,
    formulation: Formulation,
    e: Option<CMat>,
}

impl BCPair {
    /// Validated pair in the `(A, B)` form.
    pub fn new(a: CMat, b: CMat) -> Result<Self> {
        Self::tagged(a, b, Formulation::GeneralAb)
    }

    fn tagged(a: CMat, b: CMat, formulation: Formulation) -> Result<Self> {
        validate_ab(&a, &b)?.into_result()?;
        Ok(Self { a, b, formulation, e: None })
    }

    /// Builds the pair from `A1 psi(0) + B1 psi'(0) = 0`.
    pub fn from_kostrykin(a1: &CMat, b1: &CMat) -> Result<Self> {
        validate_kostrykin(a1, b1)?.into_result()?;
        Self::tagged(adj(b1), -adj(a1), Formulation::KostrykinAb)
    }

    /// Pair `(A2, B2)` derived from a unitary matrix, given directly.
    pub fn from_harmer_pair(a2: CMat, b2: CMat) -> Result<Self> {
        Self::tagged(a2, b2, Formulation::HarmerUnitary)
    }

    /// Pair whose block matrix `[[B, A], [A, -B]]` is unitary.
    pub fn from_normalized(a4: CMat, b4: CMat) -> Result<Self> {
        check_square_pair(&a4, &b4)?;
        let residual = normalized_residual(&a4, &b4);
        if residual > EPS_CHECK * 10.0 {
            return Err(Error::InvalidBoundaryCondition(ValidationReport {
                violations: vec![Violation { rule: Rule::NormalizedUnitary, residual }],
            }));
        }
        let n = a4.nrows();
        let mut bc = Self::tagged(a4, b4, Formulation::Normalized)?;
        bc.e = Some(eye(n));
        Ok(bc)
    }

    /// Dispatches on a formulation tag; for `KostrykinAb` the inputs are `(A1, B1)`.
    pub fn from_formulation(formulation: Formulation, a: CMat, b: CMat) -> Result<Self> {
        match formulation {
            Formulation::KostrykinAb => Self::from_kostrykin(&a, &b),
            Formulation::HarmerUnitary => Self::from_harmer_pair(a, b),
            Formulation::GeneralAb => Self::new(a, b),
            Formulation::Normalized => Self::from_normalized(a, b),
        }
    }

    /// Separated conditions `cos(theta_j) psi_j(0) + sin(theta_j) psi_j'(0) = 0`.
    pub fn from_angles(thetas: &[f64]) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::DimensionMismatch("no angles given".into()));
        }
        for (index, &theta) in thetas.iter().enumerate() {
            if !(theta > 0.0 && theta <= PI) {
                return Err(Error::AngleOutOfRange { index, theta });
            }
        }
        let n = thetas.len();
        // sin(pi) is not exactly zero in floating point.
        let sin = |t: f64| if t == PI { 0.0 } else { t.sin() };
        let cos = |t: f64| if t == PI / 2.0 { 0.0 } else { t.cos() };
        let a = CMat::from_fn(n, n, |i, j| if i == j { c(-sin(thetas[i]), 0.0) } else { c(0.0, 0.0) });
        let b = CMat::from_fn(n, n, |i, j| if i == j { c(cos(thetas[i]), 0.0) } else { c(0.0, 0.0) });
        let mut bc = Self::tagged(a, b, Formulation::Normalized)?;
        bc.e = Some(eye(n));
        Ok(bc)
    }

    pub fn dirichlet(n: usize) -> Self {
        Self::from_angles(&vec![PI; n]).expect("valid angles")
    }

    pub fn neumann(n: usize) -> Self {
        Self::from_angles(&vec![PI / 2.0; n]).expect("valid angles")
    }

    pub fn from_unitary(u: &UnitaryBC) -> Result<Self> {
        let m = u.u();
        let n = m.nrows();
        let half = c(0.5, 0.0);
        let (a, b, formulation) = match u.convention() {
            Convention::Harmer => ((m + eye(n)) * half, (m - eye(n)) * (I * half), Formulation::HarmerUnitary),
            Convention::CosineSine => ((m - adj(m)) * (I * half), (m + adj(m)) * half, Formulation::GeneralAb),
        };
        Self::tagged(a, b, formulation)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn gram(&self) -> CMat {
        adj(&self.a) * &self.a + adj(&self.b) * &self.b
    }

    /// Positive square root of `A^†A + B^†B`.
    pub fn e(&self) -> CMat {
        match &self.e {
            Some(e) => e.clone(),
            None => linalg::hermitian_function(&self.gram(), f64::sqrt),
        }
    }

    /// `E^{-2} = (A^†A + B^†B)^{-1}`.
    pub fn e_inv_sq(&self) -> CMat {
        linalg::hermitian_function(&self.gram(), |w| 1.0 / w)
    }

    /// Unitary `U = (A - iB) E^{-2} (A^† - iB^†)` in the Harmer convention.
    pub fn to_unitary(&self) -> UnitaryBC {
        let left = &self.a - &self.b * I;
        let right = adj(&self.a) - adj(&self.b) * I;
        let u = left * self.e_inv_sq() * right;
        UnitaryBC { u, convention: Convention::Harmer }
    }

    /// Rescales to `(A E^{-1}, B E^{-1})`.
    pub fn normalize(&self) -> Self {
        let e_inv = linalg::hermitian_function(&self.gram(), |w| 1.0 / w.sqrt());
        Self { a: &self.a * &e_inv, b: &self.b * &e_inv, formulation: Formulation::Normalized, e: Some(eye(self.n())) }
    }

    /// `(A, B) -> (A D^†, B D^†)`.
    pub fn gauge_transform(&self, d: &CMat) -> Result<Self> {
        if d.shape() != (self.n(), self.n()) {
            return Err(Error::DimensionMismatch(format!(
                "gauge matrix is {:?}, expected {n}x{n}",
                d.shape(),
                n = self.n()
            )));
        }
        let k = linalg::cond(d);
        if !(k <= GAUGE_COND_CAP) {
            return Err(Error::Singular { what: "gauge matrix", cond: k });
        }
        let d_adj = adj(d);
        Self::tagged(&self.a * &d_adj, &self.b * &d_adj, Formulation::GeneralAb)
    }

    /// The `n x 2n` matrix `[-B^† A^†]` whose kernel is the set of admissible `(psi(0), psi'(0))`.
    pub fn constraint_matrix(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::zeros(n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&(-adj(&self.b)));
        m.view_mut((0, n), (n, n)).copy_from(&adj(&self.a));
        m
    }
}

/// Whether two pairs describe the same boundary condition.
pub fn bc_subspace_equal(bc1: &BCPair, bc2: &BCPair) -> bool {
    let n = bc1.n();
    if bc2.n() != n {
        return false;
    }
    let normalize_rows = |m: CMat| {
        // Rows scaled to an orthonormal basis so both blocks weigh equally.
        let (q, _) = {
            let qr = m.adjoint().qr();
            (qr.q(), ())
        };
        q.adjoint()
    };
    let m1 = normalize_rows(bc1.constraint_matrix());
    let m2 = normalize_rows(bc2.constraint_matrix());
    let mut stacked = CMat::zeros(2 * n, 2 * n);
    stacked.view_mut((0, 0), (n, 2 * n)).copy_from(&m1);
    stacked.view_mut((n, 0), (n, 2 * n)).copy_from(&m2);
    linalg::numerical_rank(&stacked, EPS_RANK.sqrt()) == n
}
