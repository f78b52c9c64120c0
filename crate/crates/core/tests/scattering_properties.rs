mod common;

use halfline_core::bc::BCPair;
use halfline_core::linalg::{adj, c, eye, CMat};
use halfline_core::low_energy;
use halfline_core::sampling;
use halfline_core::scattering::{self, scalar, sweep, LogDerivativeMode, ScatteringProblem};
use halfline_core::solver::{Solver, SolverConfig};
use proptest::prelude::*;

fn rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 12, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn smatrix_matches_oracle(seed in any::<u64>(), k in 0.1f64..5.0) {
        let (pot, bc) = common::random_problem(seed, 3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let s = prob.smatrix(k).unwrap();
        prop_assert!(rel(&s.s, &common::smatrix(&pot, &bc, k)) < 1e-8);
        let j = prob.jost_matrix(c(k, 0.3)).unwrap().j;
        prop_assert!(rel(&j, &common::jost_matrix(&pot, &bc, c(k, 0.3))) < 1e-8);
    }

    #[test]
    fn smatrix_is_unitary_and_reflects(seed in any::<u64>(), k in 0.1f64..5.0) {
        let (pot, bc) = common::random_problem(seed, 3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let s = prob.smatrix(k).unwrap();
        let sm = prob.smatrix(-k).unwrap();
        prop_assert!(s.unitarity_residual < 1e-7);
        prop_assert!((&sm.s * &s.s - eye(3)).norm() < 1e-8);
    }

    #[test]
    fn jost_and_l_matrix_identity(seed in any::<u64>(), k in 0.1f64..5.0) {
        let (pot, bc) = common::random_problem(seed, 3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let j = prob.jost_matrix(c(k, 0.0)).unwrap().j;
        let l = prob.l_matrix(k).unwrap();
        prop_assert!(scattering::jl_identity_residual(&j, &l, k) < 1e-8);
    }

    #[test]
    fn gauge_leaves_smatrix_invariant(seed in any::<u64>(), k in 0.1f64..5.0) {
        let (pot, bc) = common::random_problem(seed, 3);
        let mut r = common::rng(seed ^ 0x5eed);
        let d = sampling::random_gauge(&mut r, 3);
        let bc2 = bc.gauge_transform(&d).unwrap();
        let s = Solver::new(&pot, SolverConfig::default()).unwrap();
        let p1 = ScatteringProblem::new(s, &bc).unwrap();
        let p2 = ScatteringProblem::new(s, &bc2).unwrap();
        let j1 = p1.jost_matrix(c(k, 0.0)).unwrap().j;
        let j2 = p2.jost_matrix(c(k, 0.0)).unwrap().j;
        prop_assert!(rel(&j2, &(j1 * adj(&d))) < 1e-9);
        prop_assert!((p1.smatrix(k).unwrap().s - p2.smatrix(k).unwrap().s).norm() < 1e-8);
    }

    #[test]
    fn decomposition_sums_to_jost(seed in any::<u64>(), kr in 0.0f64..3.0, ki in 0.0f64..1.0) {
        let (pot, bc) = common::random_problem(seed, 3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let k = c(kr, ki);
        let (t1, t2) = prob.jost_decomposition(k).unwrap();
        let j = prob.jost_matrix(k).unwrap().j;
        prop_assert!(rel(&(t1 + t2), &j) < 1e-8);
    }

    #[test]
    fn p_matrix_approaches_ik(seed in any::<u64>(), a in 0.0f64..1.4) {
        let (pot, _) = common::random_problem(seed, 3);
        let bc = BCPair::dirichlet(3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let dev = |k: f64| {
            let p = prob.p_matrix(c(k, 0.0), a).unwrap();
            (p * c(0.0, -1.0 / k) - eye(3)).norm()
        };
        let (coarse, fine) = (dev(1e-1), dev(1e-3));
        prop_assert!(fine * 5.0 <= coarse, "{coarse} {fine}");
    }

    #[test]
    fn log_derivative_slope_by_central_differences(seed in any::<u64>(), a in 0.0f64..1.4) {
        let (pot, _) = common::random_problem(seed, 3);
        let bc = BCPair::dirichlet(3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let h = 1e-4;
        let up = prob.log_derivative(c(h, 0.0), a, LogDerivativeMode::Value).unwrap();
        let down = prob.log_derivative(c(-h, 0.0), a, LogDerivativeMode::Value).unwrap();
        let fd = (up - down) * c(0.5 / h, 0.0);
        let slope = prob.log_derivative_slope(a).unwrap();
        prop_assert!((&fd - &slope).norm() <= 1e-4 * slope.norm());
    }

    #[test]
    fn normalized_jost_is_linear_at_threshold(seed in any::<u64>()) {
        let (pot, bc) = common::random_problem(seed, 3);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        let j0 = prob.jost_matrix_zero().unwrap();
        let r = low_energy::r_matrix(&prob).unwrap();
        let remainder = |k: f64| {
            let f = prob.normalized_jost(c(k, 0.0)).unwrap();
            (f - &j0 + &r * c(0.0, k)).norm() / k
        };
        let (coarse, fine) = (remainder(1e-2), remainder(1e-3));
        prop_assert!(fine < coarse && fine < 1e-2 * (1.0 + r.norm()), "{coarse} {fine}");
    }
}

#[test]
fn scalar_well_jost_function_closed_form() {
    for v in [0.7, 3.0, 9.5] {
        let pot = common::scalar_well(v);
        let bc = BCPair::dirichlet(1);
        let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
        for k in [c(0.4, 0.0), c(2.5, 0.0), c(1.0, 0.5), c(0.0, 2.0)] {
            let j = prob.jost_matrix(k).unwrap().j[(0, 0)];
            let want = common::scalar_well_dirichlet_jost(v, k);
            assert!((j - want).norm() < 1e-10 * want.norm().max(1.0), "v={v} k={k}: {j} vs {want}");
        }
        let j0 = prob.jost_matrix_zero().unwrap()[(0, 0)];
        assert!((j0 - c(-v.sqrt().cos(), 0.0)).norm() < 1e-10);
        let k = 1.7;
        let s = prob.smatrix(k).unwrap().s[(0, 0)];
        let want =
            -common::scalar_well_dirichlet_jost(v, c(-k, 0.0)) / common::scalar_well_dirichlet_jost(v, c(k, 0.0));
        assert!((s - want).norm() < 1e-10);
    }
}

#[test]
fn scalar_convention_matches_matrix() {
    let pot = common::scalar_well(1.5);
    let solver = Solver::new(&pot, SolverConfig::default()).unwrap();
    for theta in [0.3, std::f64::consts::FRAC_PI_2, 2.0, std::f64::consts::PI] {
        let bc = BCPair::from_angles(&[theta]).unwrap();
        let prob = ScatteringProblem::new(solver, &bc).unwrap();
        let m = prob.smatrix(0.9).unwrap().s[(0, 0)];
        let s = scalar::scattering(&solver, theta, 0.9).unwrap();
        assert!((m - s * scalar::matrix_sign(theta)).norm() < 1e-10);
    }
}

#[test]
fn sweep_preserves_order() {
    let (pot, bc) = common::random_problem(21, 2);
    let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
    let ks = sweep::linear_grid(0.1, 5.0, 25);
    let rows = sweep::sweep(&prob, &ks);
    assert_eq!(rows.len(), ks.len());
    for (row, &k) in rows.iter().zip(&ks) {
        let row = row.as_ref().unwrap();
        assert_eq!(row.k, k);
        assert!((&row.s - prob.smatrix(k).unwrap().s).norm() < 1e-14);
    }
}

#[test]
fn free_dirichlet_is_minus_identity() {
    let pot = halfline_core::potential::Potential::zero(3);
    let bc = BCPair::dirichlet(3);
    let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
    for k in sweep::linear_grid(0.1, 5.0, 10) {
        assert!((prob.smatrix(k).unwrap().s + eye(3)).norm() < 1e-13);
    }
}

#[test]
fn hermitian_slope_is_positive_imaginary() {
    let (pot, _) = common::random_problem(4, 3);
    let bc = BCPair::dirichlet(3);
    let prob = ScatteringProblem::new(Solver::new(&pot, SolverConfig::default()).unwrap(), &bc).unwrap();
    let slope = prob.log_derivative_slope(0.5).unwrap() * c(0.0, -1.0);
    assert!((&slope - adj(&slope)).norm() < 1e-12 * slope.norm());
    assert!(slope.symmetric_eigenvalues().iter().all(|&l| l > 0.0));
}
