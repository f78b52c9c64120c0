//! Seeded generators for random boundary conditions and potentials.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bc::{BCPair, Convention, UnitaryBC};
use crate::linalg::{self, c, CMat};
use crate::potential::{Piece, Potential};

pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let qr = gaussian_matrix(rng, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_fn(n, n, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    q * phases
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let g = gaussian_matrix(rng, n);
    (&g + g.adjoint()) * c(0.5 * scale, 0.0)
}

/// Well-conditioned invertible matrix: `I + 0.3 G / sqrt(n)` rescaled by a random unitary.
pub fn random_gauge<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n) * c(0.3 / (n as f64).sqrt(), 0.0);
    (linalg::eye(n) + g) * random_unitary(rng, n)
}

/// Valid pair built from a random unitary and a random gauge.
pub fn random_bc<R: Rng>(rng: &mut R, n: usize) -> BCPair {
    loop {
        let u = UnitaryBC::new(random_unitary(rng, n), Convention::Harmer).expect("unitary");
        let bc = BCPair::from_unitary(&u).expect("valid pair");
        if let Ok(g) = bc.gauge_transform(&random_gauge(rng, n)) {
            return g;
        }
    }
}

/// Adjacent constant pieces on `[0, x_max]` with random Hermitian values.
pub fn random_step_potential<R: Rng>(rng: &mut R, n: usize, pieces: usize, x_max: f64, scale: f64) -> Potential {
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.1..0.9) * x_max).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![0.0];
    edges.extend(cuts);
    edges.push(x_max);
    let pieces = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Piece { x_lo: w[0], x_hi: w[1], v: random_hermitian(rng, n, scale) })
        .collect();
    Potential::new(n, pieces).expect("valid pieces")
}
