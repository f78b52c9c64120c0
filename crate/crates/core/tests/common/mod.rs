#![allow(dead_code)]

use halfline_core::bc::BCPair;
use halfline_core::linalg::{c, eye, CMat};
use halfline_core::potential::{Piece, Potential};
use halfline_core::sampling;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Hermitian potential with two adjacent pieces on `[0, 1.5]` plus a random valid pair.
pub fn random_problem(seed: u64, n: usize) -> (Potential, BCPair) {
    let mut r = rng(seed);
    let pot = sampling::random_step_potential(&mut r, n, 2, 1.5, 1.0);
    let bc = sampling::random_bc(&mut r, n);
    (pot, bc)
}

fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-6 {
        1.0 + z * z / 6.0
    } else {
        z.sinh() / z
    }
}

/// Exact transfer across a constant piece through the eigenbasis of `V`.
fn piece_transfer(v: &CMat, k: Complex64, y: &CMat, yp: &CMat, h: f64) -> (CMat, CMat) {
    let n = v.nrows();
    let eig = v.clone().symmetric_eigen();
    let q = eig.eigenvectors;
    let qa = q.adjoint();
    let (ye, ype) = (&qa * y, &qa * yp);
    let mut out = (ye.clone(), ype.clone());
    for i in 0..n {
        let kappa = (c(eig.eigenvalues[i], 0.0) - k * k).sqrt();
        let ch = (kappa * h).cosh();
        let sh_over = sinhc(kappa * h) * h;
        let sh_times = kappa * kappa * sh_over;
        for j in 0..y.ncols() {
            out.0[(i, j)] = ch * ye[(i, j)] + sh_over * ype[(i, j)];
            out.1[(i, j)] = sh_times * ye[(i, j)] + ch * ype[(i, j)];
        }
    }
    (&q * out.0, &q * out.1)
}

/// Oracle propagation of `(y, y')` from `x0` to `x1`.
pub fn transfer(pot: &Potential, k: Complex64, x0: f64, y: &CMat, yp: &CMat, x1: f64) -> (CMat, CMat) {
    let n = pot.n();
    let (lo, hi) = (x0.min(x1), x0.max(x1));
    let mut cuts = vec![lo, hi];
    for p in pot.pieces() {
        for e in [p.x_lo, p.x_hi] {
            if e > lo && e < hi {
                cuts.push(e);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if x1 < x0 {
        cuts.reverse();
    }
    let zero = CMat::zeros(n, n);
    let (mut a, mut b) = (y.clone(), yp.clone());
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let v = pot.at(mid).unwrap_or(&zero);
        (a, b) = piece_transfer(v, k, &a, &b, w[1] - w[0]);
    }
    (a, b)
}

pub fn jost(pot: &Potential, k: Complex64, x: f64) -> (CMat, CMat) {
    let n = pot.n();
    let xm = pot.x_max().max(x);
    let e = (Complex64::i() * k * xm).exp();
    transfer(pot, k, xm, &(eye(n) * e), &(eye(n) * (Complex64::i() * k * e)), x)
}

pub fn regular(pot: &Potential, bc: &BCPair, k: Complex64, x: f64) -> (CMat, CMat) {
    transfer(pot, k, 0.0, bc.a(), bc.b(), x)
}

/// `J(k)` evaluated at `x = 0` from the oracle solutions.
pub fn jost_matrix(pot: &Potential, bc: &BCPair, k: Complex64) -> CMat {
    let (f, fp) = jost(pot, -k.conj(), 0.0);
    f.adjoint() * bc.b() - fp.adjoint() * bc.a()
}

pub fn smatrix(pot: &Potential, bc: &BCPair, k: f64) -> CMat {
    let j = jost_matrix(pot, bc, c(k, 0.0));
    let jn = jost_matrix(pot, bc, c(-k, 0.0));
    -(jn * j.try_inverse().expect("invertible Jost matrix"))
}

/// Scalar well `V = -v` on `[0, 1]`.
pub fn scalar_well(v: f64) -> Potential {
    Potential::new(1, vec![Piece { x_lo: 0.0, x_hi: 1.0, v: CMat::from_element(1, 1, c(-v, 0.0)) }]).unwrap()
}

/// Closed-form Jost function of the scalar well with `A = 0`, `B = -1`.
pub fn scalar_well_dirichlet_jost(v: f64, k: Complex64) -> Complex64 {
    let q = (c(v, 0.0) + k * k).sqrt();
    let ik = Complex64::i() * k;
    let sinc = if q.norm() < 1e-8 { c(1.0, 0.0) } else { q.sin() / q };
    ik.exp() * (-q.cos() + ik * sinc)
}

/// `V = W diag(-pi^2/4, -w) W^†` on `[0, 1]`: one channel sits exactly at a zero-energy resonance.
pub fn resonant_rotated(seed: u64, w: f64) -> Potential {
    let mut r = rng(seed);
    let u = sampling::random_unitary(&mut r, 2);
    let d = CMat::from_row_slice(
        2,
        2,
        &[c(-std::f64::consts::PI.powi(2) / 4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-w, 0.0)],
    );
    let v = &u * d * u.adjoint();
    let v = (&v + v.adjoint()) * c(0.5, 0.0);
    Potential::step(v, 0.0, 1.0).unwrap()
}

/// Free-space pair from `U = W diag(1, ..., 1, e^{i t_j}) W^†` with `ones` eigenvalues pinned at 1.
pub fn exceptional_free_bc(seed: u64, n: usize, ones: usize) -> BCPair {
    use halfline_core::bc::{Convention, UnitaryBC};
    use rand::Rng;
    let mut r = rng(seed);
    let w = sampling::random_unitary(&mut r, n);
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = if i < ones { c(1.0, 0.0) } else { Complex64::from_polar(1.0, r.gen_range(0.5..5.5)) };
    }
    let u = &w * d * w.adjoint();
    let bc = BCPair::from_unitary(&UnitaryBC::new(u, Convention::Harmer).unwrap()).unwrap();
    bc.gauge_transform(&sampling::random_gauge(&mut r, n)).unwrap()
}
