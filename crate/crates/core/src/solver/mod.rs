//! Matrix solutions of `-psi'' + V psi = k^2 psi` on the half line.
//!
//! Every solution is produced by propagating a `(psi, psi')` snapshot from a
//! point where it is known exactly: `x_max` for the Jost-type solutions,
//! `0` for the regular solution, the anchor `a` for `omega`, `C` and `S`.

pub mod ode;

use num_complex::Complex64;

use crate::bc::BCPair;
use crate::error::{Error, Result};
use crate::linalg::{adj, c, eye, CMat};
use crate::potential::Potential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnchorPoint {
    /// The support bound `x_max`, where `f(0, x) = I` exactly.
    Auto,
    At(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub anchor: AnchorPoint,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_step: 0.25, anchor: AnchorPoint::Auto }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.abs_tol) && ok(self.rel_tol) && ok(self.max_step)) {
            return Err(Error::InvalidArgument("solver tolerances and max_step must be positive".into()));
        }
        if let AnchorPoint::At(a) = self.anchor {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::InvalidArgument(format!("anchor a = {a} must be finite and nonnegative")));
            }
        }
        Ok(())
    }
}

/// Snapshot `(x, psi(x), psi'(x))` of an `n x n` matrix solution.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix {
    pub x: f64,
    pub value: CMat,
    pub deriv: CMat,
}

impl StateMatrix {
    pub fn new(x: f64, value: CMat, deriv: CMat) -> Self {
        Self { x, value, deriv }
    }

    fn stacked(&self) -> CMat {
        let n = self.value.nrows();
        let m = self.value.ncols();
        let mut y = CMat::zeros(2 * n, m);
        y.rows_mut(0, n).copy_from(&self.value);
        y.rows_mut(n, n).copy_from(&self.deriv);
        y
    }

    fn from_stacked(x: f64, y: CMat) -> Self {
        let n = y.nrows() / 2;
        Self { x, value: y.rows(0, n).into_owned(), deriv: y.rows(n, n).into_owned() }
    }

    /// Right multiplication of both components.
    pub fn times(&self, m: &CMat) -> Self {
        Self { x: self.x, value: &self.value * m, deriv: &self.deriv * m }
    }
}

/// `[F; G] = F G' - F' G`, or `F^† G' - F'^† G` with `conjugate_first`.
pub fn wronskian(f: &StateMatrix, g: &StateMatrix, conjugate_first: bool) -> Result<CMat> {
    if f.x != g.x {
        return Err(Error::MismatchedPoints(f.x, g.x));
    }
    Ok(if conjugate_first {
        adj(&f.value) * &g.deriv - adj(&f.deriv) * &g.value
    } else {
        &f.value * &g.deriv - &f.deriv * &g.value
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Solver<'a> {
    pot: &'a Potential,
    cfg: SolverConfig,
}

impl<'a> Solver<'a> {
    pub fn new(pot: &'a Potential, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { pot, cfg })
    }

    pub fn potential(&self) -> &'a Potential {
        self.pot
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn n(&self) -> usize {
        self.pot.n()
    }

    pub fn x_max(&self) -> f64 {
        self.pot.x_max()
    }

    /// The anchor `a` resolved against the potential.
    pub fn anchor(&self) -> f64 {
        match self.cfg.anchor {
            AnchorPoint::Auto => self.pot.x_max(),
            AnchorPoint::At(a) => a,
        }
    }

    fn check_x(x: f64) -> Result<()> {
        if x.is_finite() && x >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("x = {x} must be finite and nonnegative")))
        }
    }

    pub fn propagate(&self, k: Complex64, state: &StateMatrix, x_target: f64) -> Result<StateMatrix> {
        Self::check_x(x_target)?;
        Self::check_x(state.x)?;
        let n = self.n();
        if state.value.nrows() != n || state.deriv.shape() != state.value.shape() {
            return Err(Error::DimensionMismatch(format!(
                "state is {:?}/{:?}, potential has n = {n}",
                state.value.shape(),
                state.deriv.shape()
            )));
        }
        if !(crate::linalg::is_finite(&state.value) && crate::linalg::is_finite(&state.deriv)) {
            return Err(Error::InvalidArgument("state has non-finite entries".into()));
        }
        let (lo, hi) = if x_target >= state.x { (state.x, x_target) } else { (x_target, state.x) };
        let mut segments = self.pot.segments(lo, hi);
        let forward = x_target >= state.x;
        if !forward {
            segments.reverse();
        }
        let k2 = k * k;
        let mut y = state.stacked();
        for (s_lo, s_hi, v) in segments {
            let (from, to) = if forward { (s_lo, s_hi) } else { (s_hi, s_lo) };
            y = match v {
                None => ode::free_transfer(k, &y, to - from),
                Some(v) => {
                    let m = v - eye(n) * k2;
                    ode::dopri(&m, &y, from, to, &self.cfg)?
                }
            };
        }
        Ok(StateMatrix::from_stacked(x_target, y))
    }

    /// Marches a solution through increasing or decreasing sample points.
    pub fn sample(&self, k: Complex64, init: &StateMatrix, xs: &[f64]) -> Result<Vec<StateMatrix>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut cur = init.clone();
        for &x in xs {
            cur = self.propagate(k, &cur, x)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// `f(k, x)`; exactly `e^{ikx} I` for `x >= x_max`.
    pub fn jost_solution(&self, k: Complex64, x: f64) -> Result<StateMatrix> {
        Self::check_x(x)?;
        let n = self.n();
        let xm = self.x_max();
        let exact = |x: f64| {
            let e = (Complex64::i() * k * x).exp();
            StateMatrix::new(x, eye(n) * e, eye(n) * (Complex64::i() * k * e))
        };
        if x >= xm {
            return Ok(exact(x));
        }
        self.propagate(k, &exact(xm), x)
    }

    /// `(f(0, x), g(0, x))` with `g(0, x_max) = x_max I`, `g'(0, x_max) = I`.
    pub fn zero_energy_pair(&self, x: f64) -> Result<(StateMatrix, StateMatrix)> {
        let n = self.n();
        let xm = self.x_max();
        let f0 = self.jost_solution(c(0.0, 0.0), x)?;
        let g_init = StateMatrix::new(xm, eye(n) * c(xm, 0.0), eye(n));
        let g0 = self.propagate(c(0.0, 0.0), &g_init, x)?;
        Ok((f0, g0))
    }

    /// `phi(k, x)` with `phi(k, 0) = A`, `phi'(k, 0) = B`.
    pub fn regular_solution(&self, bc: &BCPair, k: Complex64, x: f64) -> Result<StateMatrix> {
        self.check_bc(bc)?;
        let init = StateMatrix::new(0.0, bc.a().clone(), bc.b().clone());
        self.propagate(k, &init, x)
    }

    /// `omega(k, x)` with `omega(k, a) = f(0, a)`, `omega'(k, a) = f'(0, a)`.
    pub fn omega_solution(&self, k: Complex64, a: f64, x: f64) -> Result<StateMatrix> {
        let f0 = self.jost_solution(c(0.0, 0.0), a)?;
        self.propagate(k, &f0, x)
    }

    /// Cosine-like `C(k, x)` and sine-like `S(k, x)` normalized at `a`.
    pub fn cs_solutions(&self, k: Complex64, a: f64, x: f64) -> Result<(StateMatrix, StateMatrix)> {
        Self::check_x(a)?;
        let n = self.n();
        let zero = CMat::zeros(n, n);
        let cos = self.propagate(k, &StateMatrix::new(a, eye(n), zero.clone()), x)?;
        let sin = self.propagate(k, &StateMatrix::new(a, zero, eye(n)), x)?;
        Ok((cos, sin))
    }

    /// `(alpha, beta)` with `phi(0, x) = f(0, x) alpha + g(0, x) beta`.
    pub fn zero_energy_decomposition(&self, bc: &BCPair) -> Result<(CMat, CMat)> {
        let xm = self.x_max();
        let phi = self.regular_solution(bc, c(0.0, 0.0), xm)?;
        let beta = phi.deriv.clone();
        let alpha = &phi.value - &beta * c(xm, 0.0);
        Ok((alpha, beta))
    }

    /// `int_from^to w(y) V(y) psi(y) dy` for the solution through `init`,
    /// by composite Simpson with one Richardson step on every piece.
    pub fn integrate_v(
        &self,
        k: Complex64,
        init: &StateMatrix,
        from: f64,
        to: f64,
        weight: impl Fn(f64) -> f64,
    ) -> Result<CMat> {
        let n = self.n();
        let mut total = CMat::zeros(n, init.value.ncols());
        let mut cur = init.clone();
        for (lo, hi, v) in self.pot.segments(from.max(0.0), to) {
            let Some(v) = v else { continue };
            let len = hi - lo;
            let rate = (v.norm() + k.norm_sqr()).sqrt().max(1.0);
            let fine = ((len * rate * 64.0).ceil() as usize).max(16).next_multiple_of(4);
            let h = len / fine as f64;
            let xs: Vec<f64> = (0..=fine).map(|i| if i == fine { hi } else { lo + i as f64 * h }).collect();
            let states = self.sample(k, &cur, &xs)?;
            let vals: Vec<CMat> = states.iter().map(|s| v * &s.value * c(weight(s.x), 0.0)).collect();
            let simpson = |stride: usize| {
                let m = fine / stride;
                let mut acc = &vals[0] + &vals[fine];
                for i in 1..m {
                    let f = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += &vals[i * stride] * c(f, 0.0);
                }
                acc * c(h * stride as f64 / 3.0, 0.0)
            };
            let fine_sum = simpson(1);
            let coarse_sum = simpson(2);
            total += (fine_sum * c(16.0, 0.0) - coarse_sum) * c(1.0 / 15.0, 0.0);
            cur = states.last().cloned().expect("nonempty grid");
        }
        Ok(total)
    }

    /// Residuals of `int_a^inf V omega(0) = -f'(0, a)` and
    /// `int_a^inf y V omega(0) = f(0, a) - a f'(0, a) - I`.
    pub fn moment_identities_residual(&self, a: f64) -> Result<(f64, f64)> {
        Self::check_x(a)?;
        let n = self.n();
        let xm = self.x_max();
        if a >= xm {
            return Ok((0.0, 0.0));
        }
        let f0 = self.jost_solution(c(0.0, 0.0), a)?;
        let i1 = self.integrate_v(c(0.0, 0.0), &f0, a, xm, |_| 1.0)?;
        let i2 = self.integrate_v(c(0.0, 0.0), &f0, a, xm, |y| y)?;
        let r1 = (&i1 + &f0.deriv).norm();
        let r2 = (&i2 - &f0.value + &f0.deriv * c(a, 0.0) + eye(n)).norm();
        Ok((r1, r2))
    }

    fn check_bc(&self, bc: &BCPair) -> Result<()> {
        if bc.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "boundary condition has n = {}, potential has n = {}",
                bc.n(),
                self.n()
            )));
        }
        Ok(())
    }
}
