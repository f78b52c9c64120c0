//! Compactly supported piecewise-constant Hermitian matrix potentials.

use crate::bc::EPS_CHECK;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

#[derive(Debug, Clone)]
pub struct Piece {
    pub x_lo: f64,
    pub x_hi: f64,
    pub v: CMat,
}

#[derive(Debug, Clone)]
pub struct Potential {
    n: usize,
    pieces: Vec<Piece>,
}

impl Potential {
    /// Pieces must be sorted, disjoint, inside `[0, inf)` and Hermitian.
    pub fn new(n: usize, pieces: Vec<Piece>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPotential("matrix size must be positive".into()));
        }
        let mut prev_hi = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            if !(p.x_lo.is_finite() && p.x_hi.is_finite()) {
                return Err(Error::InvalidPotential(format!("piece {i}: non-finite endpoint")));
            }
            if p.x_lo < 0.0 {
                return Err(Error::InvalidPotential(format!("piece {i}: x_lo = {} is negative", p.x_lo)));
            }
            if !(p.x_hi > p.x_lo) {
                return Err(Error::InvalidPotential(format!("piece {i}: empty interval [{}, {}]", p.x_lo, p.x_hi)));
            }
            if p.x_lo < prev_hi {
                return Err(Error::InvalidPotential(format!("piece {i}: overlaps or is out of order")));
            }
            if p.v.shape() != (n, n) {
                return Err(Error::InvalidPotential(format!("piece {i}: V is {:?}, expected {n}x{n}", p.v.shape())));
            }
            if !linalg::is_finite(&p.v) {
                return Err(Error::InvalidPotential(format!("piece {i}: V has non-finite entries")));
            }
            let r = linalg::hermitian_residual(&p.v);
            if r > EPS_CHECK * p.v.norm().max(1.0) {
                return Err(Error::InvalidPotential(format!("piece {i}: V is not Hermitian (residual {r:.3e})")));
            }
            prev_hi = p.x_hi;
        }
        Ok(Self { n, pieces })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, pieces: Vec::new() }
    }

    /// Single constant piece `v` on `[x_lo, x_hi]`.
    pub fn step(v: CMat, x_lo: f64, x_hi: f64) -> Result<Self> {
        Self::new(v.nrows(), vec![Piece { x_lo, x_hi, v }])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.v.iter().all(|z| *z == num_complex::Complex64::new(0.0, 0.0)))
    }

    /// Support bound; zero for the free potential.
    pub fn x_max(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.x_hi)
    }

    /// `V(x)`, or `None` where the potential vanishes. Intervals are closed on the left.
    pub fn at(&self, x: f64) -> Option<&CMat> {
        self.pieces.iter().find(|p| p.x_lo <= x && x < p.x_hi).map(|p| &p.v)
    }

    /// Splits `[lo, hi]` into maximal intervals on which `V` is constant.
    pub fn segments(&self, lo: f64, hi: f64) -> Vec<(f64, f64, Option<&CMat>)> {
        let mut cuts = vec![lo, hi];
        for p in &self.pieces {
            for x in [p.x_lo, p.x_hi] {
                if x > lo && x < hi {
                    cuts.push(x);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2).map(|w| (w[0], w[1], self.at(0.5 * (w[0] + w[1])))).collect()
    }

    /// `int (1 + x) |V(x)| dx` with the Frobenius norm.
    pub fn first_moment_norm(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let w = p.x_hi - p.x_lo;
                p.v.norm() * (w + 0.5 * (p.x_hi * p.x_hi - p.x_lo * p.x_lo))
            })
            .sum()
    }
}
