//! Command implementations. Each returns the rendered report and an exit code;
//! writing to stdout or `--out` is left to the caller.

use halfline_core::bc::BCPair;
use halfline_core::field::{self, Field, GaussQ};
use halfline_core::jordan::{ChainOrder, JordanData, JordanMode};
use halfline_core::linalg::{self, adj, c, eye, max_abs_diff, CMat};
use halfline_core::low_energy::{self, LowEnergyOptions, ZeroEnergyResult};
use halfline_core::potential::Potential;
use halfline_core::scattering::{self, sweep, LogDerivativeMode, ScatteringProblem};
use halfline_core::solver::{wronskian, Solver};
use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::config::{Format, JobConfig};
use crate::error::{CliError, CliResult, EXIT_MISMATCH, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};
use crate::fixtures::{Fixture, FixtureId, Params};
use crate::output;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub code: i32,
}

impl Report {
    fn json(v: &Value, code: i32) -> Self {
        Self { body: output::pretty(v), code }
    }
}

/// Small-k probes used for continuity of `S` at the threshold.
pub const CONTINUITY_PROBES: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Mismatch tolerance for fixture comparisons.
pub const EXAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertTarget {
    Unitary,
    Normalized,
    Kostrykin,
}

impl ConvertTarget {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "unitary" => Some(ConvertTarget::Unitary),
            "normalized" => Some(ConvertTarget::Normalized),
            "kostrykin" => Some(ConvertTarget::Kostrykin),
            _ => None,
        }
    }
}

pub fn parse_mode(s: &str) -> Option<JordanMode> {
    match s {
        "exact" => Some(JordanMode::Exact),
        "numeric" => Some(JordanMode::Numeric),
        _ => None,
    }
}

fn gq_text(z: &GaussQ) -> String {
    z.to_string()
}

fn exact_matrix_text(m: &DMatrix<GaussQ>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| Value::String(gq_text(&m[(i, j)]))).collect()))
            .collect(),
    )
}

fn exact_diff(a: &DMatrix<GaussQ>, b: &DMatrix<GaussQ>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    field::max_magnitude(&(a - b))
}

fn numeric_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    max_abs_diff(a, b)
}

fn check(name: &str, residual: f64, tolerance: f64) -> Value {
    json!({ "name": name, "residual": residual, "tolerance": tolerance, "pass": residual.is_finite() && residual <= tolerance })
}

fn failed_check(name: &str, tolerance: f64, err: &CliError) -> Value {
    json!({ "name": name, "residual": Value::Null, "tolerance": tolerance, "pass": false, "error": err.to_string() })
}

fn all_pass(checks: &[Value]) -> bool {
    checks.iter().all(|c| c["pass"] == Value::Bool(true))
}

// ---------------------------------------------------------------- bc

pub fn run_bc_validate(cfg: &JobConfig) -> CliResult<Report> {
    let raw = cfg.bc.raw()?;
    let report = raw.report()?;
    let violations: Vec<Value> =
        report.violations.iter().map(|v| json!({ "rule": v.rule.id(), "residual": v.residual })).collect();
    let formulation = match &raw {
        crate::config::RawBc::Pair { formulation, .. } => formulation.as_str(),
        crate::config::RawBc::Angles(_) => "angles",
        crate::config::RawBc::Unitary { .. } => "unitary",
    };
    let valid = report.ok();
    let v = json!({ "n": raw.n(), "formulation": formulation, "valid": valid, "violations": violations });
    Ok(Report::json(&v, if valid { EXIT_OK } else { EXIT_VALIDATION }))
}

pub fn run_bc_convert(cfg: &JobConfig, to: ConvertTarget) -> CliResult<Report> {
    let pair = cfg.bc()?;
    let v = match to {
        ConvertTarget::Unitary => {
            let u = pair.to_unitary();
            json!({ "to": "unitary", "convention": u.convention().as_str(), "U": output::matrix(u.u()) })
        }
        ConvertTarget::Normalized => {
            let p = pair.normalize();
            json!({ "to": "normalized", "A": output::matrix(p.a()), "B": output::matrix(p.b()) })
        }
        ConvertTarget::Kostrykin => {
            let (a1, b1) = (-adj(pair.b()), adj(pair.a()));
            json!({ "to": "kostrykin", "A": output::matrix(&a1), "B": output::matrix(&b1) })
        }
    };
    Ok(Report::json(&v, EXIT_OK))
}

// ---------------------------------------------------------------- sweep

type Row = (f64, Result<scattering::SMatrixEvaluation, String>);

fn sweep_rows(cfg: &JobConfig) -> CliResult<(usize, Vec<Row>)> {
    let grid = cfg.kgrid.as_ref().ok_or_else(|| CliError::Validation("kgrid: required for sweep".into()))?;
    let pot = cfg.potential()?;
    let bc = cfg.bc()?;
    let solver = Solver::new(&pot, cfg.solver_config())?;
    let prob = ScatteringProblem::new(solver, &bc)?;
    let ks = sweep::linear_grid(grid.k_min, grid.k_max, grid.steps);
    let rows = sweep::sweep(&prob, &ks);
    Ok((bc.n(), ks.into_iter().zip(rows.into_iter().map(|r| r.map_err(|e| e.to_string()))).collect()))
}

fn render_csv(n: usize, rows: &[Row]) -> String {
    let mut out = output::csv_header(n);
    out.push('\n');
    for (k, row) in rows {
        let mut fields = vec![output::csv_float(*k)];
        match row {
            Ok(ev) => {
                for i in 0..n {
                    for j in 0..n {
                        fields.push(output::csv_float(ev.s[(i, j)].re));
                        fields.push(output::csv_float(ev.s[(i, j)].im));
                    }
                }
                fields.push(output::csv_float(ev.unitarity_residual));
                fields.push(output::csv_float(ev.det_j_abs));
                fields.push(String::new());
            }
            Err(e) => {
                fields.extend(std::iter::repeat_n(String::new(), 2 * n * n + 2));
                fields.push(output::csv_text(e));
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_json(n: usize, rows: &[Row]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(k, row)| match row {
            Ok(ev) => json!({
                "k": k,
                "S": output::matrix(&ev.s),
                "unitarity_residual": ev.unitarity_residual,
                "det_J_abs": ev.det_j_abs,
            }),
            Err(e) => json!({ "k": k, "error": e }),
        })
        .collect();
    output::pretty(&json!({ "n": n, "rows": rows }))
}

/// Runs the sweep, writes every configured sink and returns the primary rendering.
pub fn run_sweep(cfg: &JobConfig, format: Option<Format>) -> CliResult<Report> {
    let (n, rows) = sweep_rows(cfg)?;
    let render = |f: Format| match f {
        Format::Csv => render_csv(n, &rows),
        Format::Json => render_json(n, &rows),
    };
    for sink in &cfg.outputs {
        std::fs::write(&sink.path, render(sink.format))?;
    }
    let primary = format.or_else(|| cfg.outputs.first().map(|s| s.format)).unwrap_or(Format::Csv);
    let failed = rows.iter().any(|(_, r)| r.is_err());
    Ok(Report { body: render(primary), code: if failed { EXIT_NUMERICAL } else { EXIT_OK } })
}

// ---------------------------------------------------------------- s0

fn zero_energy(prob: &ScatteringProblem<'_>, mode: JordanMode) -> CliResult<ZeroEnergyResult> {
    Ok(low_energy::s_zero(prob, LowEnergyOptions { mode, order: ChainOrder::default() })?)
}

/// `‖S(k) − S(0)‖` at each continuity probe.
pub fn continuity_probes(prob: &ScatteringProblem<'_>, s0: &CMat) -> CliResult<Vec<f64>> {
    CONTINUITY_PROBES.iter().map(|&k| Ok((prob.smatrix(k)?.s - s0).norm())).collect()
}

pub fn s0_report(prob: &ScatteringProblem<'_>, mode: JordanMode) -> CliResult<Value> {
    let r = zero_energy(prob, mode)?;
    let jd = &r.jordan;
    let e = &r.expansion;
    let chains: Vec<Value> =
        jd.chains.iter().map(|ch| json!({ "lambda": output::complex(ch.lambda), "length": ch.len })).collect();
    let probes = continuity_probes(prob, &r.s0.s)?;
    let probes: Vec<Value> =
        CONTINUITY_PROBES.iter().zip(&probes).map(|(k, d)| json!({ "k": k, "distance": d })).collect();
    let (lead, order) = match mode {
        JordanMode::Exact => {
            let (jde, expe) = low_energy::s_zero_exact(prob, ChainOrder::default())?;
            let (lead, order) = low_energy::jost_inverse_asymptotics(&expe, &jde)?;
            (field::to_c64_matrix(&lead), order)
        }
        JordanMode::Numeric => low_energy::jost_inverse_asymptotics(e, jd)?,
    };
    let mut v = Map::new();
    v.insert("mode".into(), json!(mode.as_str()));
    v.insert("n".into(), json!(prob.n()));
    v.insert("anchor".into(), json!(prob.anchor()));
    v.insert("mu".into(), json!(jd.mu));
    v.insert("nu".into(), json!(jd.nu));
    v.insert("kappa".into(), json!(jd.kappa));
    v.insert("chains".into(), Value::Array(chains));
    v.insert("S0".into(), output::matrix(&r.s0.s));
    if let Some(exact) = &r.s0_exact {
        v.insert("S0_exact".into(), exact_matrix_text(exact));
    }
    v.insert("involution_residual".into(), json!(r.involution_residual));
    v.insert("unitarity_residual".into(), json!(r.s0.unitarity_residual));
    v.insert("continuity_probes".into(), Value::Array(probes));
    v.insert("P1".into(), output::matrix(&e.p1));
    v.insert("P2".into(), output::matrix(&e.p2));
    v.insert("A1".into(), output::matrix(&e.a1));
    v.insert("B1".into(), output::matrix(&e.b1));
    v.insert("C1".into(), output::matrix(&e.c1));
    v.insert("D0".into(), output::matrix(&e.d0));
    v.insert("jost_inverse_order".into(), json!(order));
    v.insert("jost_inverse_lead".into(), output::matrix(&lead));
    Ok(Value::Object(v))
}

pub fn run_s0(cfg: &JobConfig, mode: JordanMode) -> CliResult<Report> {
    let pot = cfg.potential()?;
    let bc = cfg.bc()?;
    let prob = ScatteringProblem::new(Solver::new(&pot, cfg.solver_config())?, &bc)?;
    Ok(Report::json(&s0_report(&prob, mode)?, EXIT_OK))
}

// ---------------------------------------------------------------- verify

fn rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn verify_ks(cfg: &JobConfig) -> Vec<f64> {
    match &cfg.kgrid {
        Some(g) => {
            let grid = sweep::linear_grid(g.k_min, g.k_max, g.steps);
            let picks = [0, grid.len() / 2, grid.len() - 1];
            let mut ks: Vec<f64> = picks.iter().map(|&i| grid[i]).collect();
            ks.dedup();
            ks
        }
        None => vec![0.5, 1.0, 2.0],
    }
}

type Item<'a> = (&'static str, f64, Box<dyn Fn() -> CliResult<f64> + 'a>);

/// Property suite over one problem; every item reports its residual against a fixed tolerance.
pub fn verify_items(prob: &ScatteringProblem<'_>, ks: &[f64]) -> Vec<Value> {
    let s = prob.solver();
    let bc = prob.bc();
    let n = prob.n();
    let a = prob.anchor();
    let xm = s.x_max();
    // The anchor defaults to the end of the support, where some identities are trivial.
    let anchors = [a, 0.5 * xm];
    let max_anchor = |f: &dyn Fn(f64) -> CliResult<f64>| -> CliResult<f64> {
        anchors.iter().try_fold(0.0f64, |m, &x| Ok(m.max(f(x)?)))
    };
    let max_over =
        |f: &dyn Fn(f64) -> CliResult<f64>| -> CliResult<f64> { ks.iter().try_fold(0.0f64, |m, &k| Ok(m.max(f(k)?))) };
    let items: Vec<Item<'_>> = vec![
        (
            "wronskian_constancy",
            1e-8,
            Box::new(move || {
                max_over(&|k| {
                    let kc = c(k, 0.0);
                    let at = |x: f64| -> CliResult<(CMat, CMat)> {
                        let f = s.jost_solution(-kc, x)?;
                        let phi = s.regular_solution(bc, kc, x)?;
                        let (cs, sn) = s.cs_solutions(kc, a, x)?;
                        Ok((wronskian(&f, &phi, true)?, wronskian(&cs, &sn, true)?))
                    };
                    let (w0, v0) = at(0.0)?;
                    let (w1, v1) = at(xm + 0.5)?;
                    Ok(rel(&w0, &w1).max(rel(&v0, &v1)))
                })
            }),
        ),
        (
            "jost_wronskian_identities",
            1e-8,
            Box::new(move || {
                max_over(&|k| {
                    let f = s.jost_solution(c(k, 0.0), 0.0)?;
                    let fm = s.jost_solution(c(-k, 0.0), 0.0)?;
                    let same = rel(&wronskian(&f, &f, true)?, &(eye(n) * c(0.0, 2.0 * k)));
                    let cross = wronskian(&fm, &f, true)?.norm() / f.value.norm().powi(2).max(1.0);
                    Ok(same.max(cross))
                })
            }),
        ),
        (
            "jost_l_identity",
            1e-8,
            Box::new(move || {
                max_over(&|k| {
                    let j = prob.jost_matrix(c(k, 0.0))?.j;
                    let l = prob.l_matrix(k)?;
                    Ok(scattering::jl_identity_residual(&j, &l, k))
                })
            }),
        ),
        (
            "moment_identities",
            1e-6,
            Box::new(move || {
                max_anchor(&|x| {
                    let (r1, r2) = s.moment_identities_residual(x)?;
                    Ok(r1.max(r2))
                })
            }),
        ),
        (
            "p_ratio_decay",
            0.2,
            Box::new(move || {
                max_anchor(&|x| {
                    let dev = |k: f64| -> CliResult<f64> {
                        Ok((prob.p_matrix(c(k, 0.0), x)? * c(0.0, -1.0 / k) - eye(n)).norm())
                    };
                    let (coarse, fine) = (dev(1e-1)?, dev(1e-3)?);
                    Ok(if fine == 0.0 { 0.0 } else { fine / coarse })
                })
            }),
        ),
        (
            "log_derivative_slope",
            1e-4,
            Box::new(move || {
                max_anchor(&|x| {
                    let h = 1e-4;
                    let up = prob.log_derivative(c(h, 0.0), x, LogDerivativeMode::Value)?;
                    let down = prob.log_derivative(c(-h, 0.0), x, LogDerivativeMode::Value)?;
                    let fd = (up - down) * c(0.5 / h, 0.0);
                    let slope = prob.log_derivative_slope(x)?;
                    Ok((&fd - &slope).norm() / slope.norm().max(f64::MIN_POSITIVE))
                })
            }),
        ),
        (
            "jost_decomposition",
            1e-8,
            Box::new(move || {
                max_over(&|k| {
                    let (t1, t2) = prob.jost_decomposition(c(k, 0.0))?;
                    Ok(rel(&(t1 + t2), &prob.jost_matrix(c(k, 0.0))?.j))
                })
            }),
        ),
        ("smatrix_unitarity", 1e-7, Box::new(move || max_over(&|k| Ok(prob.smatrix(k)?.unitarity_residual)))),
        (
            "smatrix_reflection",
            1e-8,
            Box::new(move || max_over(&|k| Ok((prob.smatrix(-k)?.s * prob.smatrix(k)?.s - eye(n)).norm()))),
        ),
        ("s0_involution", 1e-8, Box::new(move || Ok(zero_energy(prob, JordanMode::Numeric)?.involution_residual))),
        ("s0_unitarity", 1e-8, Box::new(move || Ok(zero_energy(prob, JordanMode::Numeric)?.s0.unitarity_residual))),
        (
            "s0_continuity",
            1e-2,
            Box::new(move || {
                let r = zero_energy(prob, JordanMode::Numeric)?;
                let d = continuity_probes(prob, &r.s0.s)?;
                let monotone = d.windows(2).all(|w| w[1] <= w[0] + 1e-12);
                Ok(if monotone { d[d.len() - 1] } else { f64::INFINITY })
            }),
        ),
    ];
    items
        .into_iter()
        .map(|(name, tol, f)| match f() {
            Ok(r) => check(name, r, tol),
            Err(e) => failed_check(name, tol, &e),
        })
        .collect()
}

pub fn run_verify(cfg: &JobConfig) -> CliResult<Report> {
    let pot = cfg.potential()?;
    let bc = cfg.bc()?;
    let prob = ScatteringProblem::new(Solver::new(&pot, cfg.solver_config())?, &bc)?;
    let ks = verify_ks(cfg);
    let items = verify_items(&prob, &ks);
    let pass = all_pass(&items);
    let v = json!({ "k": ks, "anchor": prob.anchor(), "pass": pass, "items": items });
    Ok(Report::json(&v, if pass { EXIT_OK } else { EXIT_NUMERICAL }))
}

// ---------------------------------------------------------------- example

fn exact_pair(bc: &BCPair) -> CliResult<(DMatrix<GaussQ>, DMatrix<GaussQ>)> {
    let conv = |m: &CMat| -> CliResult<DMatrix<GaussQ>> {
        let mut out = DMatrix::<GaussQ>::from_element(m.nrows(), m.ncols(), field::gq(0, 0, 1));
        for (o, z) in out.iter_mut().zip(m.iter()) {
            *o = field::gq_from_c64(*z).ok_or_else(|| CliError::Validation("non-finite boundary matrix".into()))?;
        }
        Ok(out)
    };
    Ok((conv(bc.a())?, conv(bc.b())?))
}

/// Jordan data on the displayed basis, sharing chain structure with `jd`.
fn on_basis(jd: &JordanData<GaussQ>, basis: &DMatrix<GaussQ>) -> Option<JordanData<GaussQ>> {
    let sinv = field::inverse(basis, 0.0)?;
    Some(JordanData { smat: basis.clone(), sinv, ..jd.clone() })
}

/// Compares one fixture against the full pipeline.
pub fn example_report(fx: &Fixture, mode: JordanMode) -> CliResult<Value> {
    let bc = fx.bc()?;
    let pot = Potential::zero(fx.n());
    let prob = ScatteringProblem::new(Solver::new(&pot, Default::default())?, &bc)?;
    let (a_ex, b_ex) = exact_pair(&bc)?;
    let mut checks = Vec::new();

    let ks = Fixture::sample_ks();
    let labels = ["J(1)", "J(i/2)"];
    for (k, label) in ks.iter().zip(labels) {
        let want = fx.jost(k);
        let r = match mode {
            JordanMode::Exact => exact_diff(&scattering::free_jost_exact(&a_ex, &b_ex, k), &want),
            JordanMode::Numeric => {
                let kc = k.to_c64();
                numeric_diff(&prob.jost_matrix(kc)?.j, &field::to_c64_matrix(&want))
            }
        };
        checks.push(check(label, r, EXAMPLE_TOL));
    }

    let one = field::gq(1, 0, 1);
    let s_target = if fx.smatrix_is_reference() {
        fx.displayed_smatrix(&one)
    } else {
        fx.smatrix_from_jost(&one).ok_or_else(|| CliError::Numerical("fixture J(1) is singular".into()))?
    };
    let r = match mode {
        JordanMode::Exact => match scattering::free_smatrix_exact(&a_ex, &b_ex, &one) {
            Some(s) => exact_diff(&s, &s_target),
            None => f64::INFINITY,
        },
        JordanMode::Numeric => numeric_diff(&prob.smatrix(1.0)?.s, &field::to_c64_matrix(&s_target)),
    };
    checks.push(check("S(1)", r, EXAMPLE_TOL));

    let z = zero_energy(&prob, mode)?;
    let s0_target = fx.s0_target();
    let r = match &z.s0_exact {
        Some(s) => exact_diff(s, &s0_target),
        None => numeric_diff(&z.s0.s, &field::to_c64_matrix(&s0_target)),
    };
    checks.push(check("S(0)", r, EXAMPLE_TOL));
    checks.push(check("S(0)^2 = I", z.involution_residual, EXAMPLE_TOL));
    checks.push(check("S(0) unitary", z.s0.unitarity_residual, EXAMPLE_TOL));

    let st = fx.structure();
    checks.push(check("mu", (z.jordan.mu as f64 - st.mu as f64).abs(), 0.0));
    checks.push(check("nu", (z.jordan.nu as f64 - st.nu as f64).abs(), 0.0));
    checks.push(check("P1", numeric_diff(&z.expansion.p1, &field::to_c64_matrix(&st.p1)), 0.0));
    checks.push(check("P2", numeric_diff(&z.expansion.p2, &field::to_c64_matrix(&st.p2)), 0.0));

    // Blocks are basis dependent; compare on the displayed basis when it is rational.
    let (jd_ex, exp_ex) = low_energy::s_zero_exact(&prob, ChainOrder::default())?;
    let blocks = fx.displayed_blocks();
    let exp_disp = match fx.displayed_basis() {
        Some(basis) => {
            let jd =
                on_basis(&jd_ex, &basis).ok_or_else(|| CliError::Numerical("displayed basis is singular".into()))?;
            checks.push(check(
                "displayed basis is a Jordan basis",
                field::max_magnitude(&(&jd.m * &jd.smat - &jd.smat * jd.jordan_matrix())),
                0.0,
            ));
            low_energy::expansion(&jd, &exp_ex.r)?
        }
        None => exp_ex.clone(),
    };
    checks.push(check("A1", exact_diff(&exp_disp.a1, &blocks.a1), EXAMPLE_TOL));
    if let Some(b1) = &blocks.b1 {
        checks.push(check("B1", exact_diff(&exp_disp.b1, b1), EXAMPLE_TOL));
    }
    if let Some(c1) = &blocks.c1 {
        checks.push(check("C1", exact_diff(&exp_disp.c1, c1), EXAMPLE_TOL));
    }
    checks.push(check("D0", exact_diff(&exp_disp.d0, &blocks.d0), EXAMPLE_TOL));
    checks.push(check("S(0) on displayed basis", exact_diff(&exp_disp.s0, &s0_target), EXAMPLE_TOL));
    if fx.id == FixtureId::TwoChain {
        let c1 = &z.expansion.c1;
        let term = match field::inverse(&z.expansion.a1, 1e-12) {
            Some(inv) => (c1 * inv * c(2.0, 0.0)).norm(),
            None => f64::INFINITY,
        };
        checks.push(check("C1 = 0", c1.norm(), EXAMPLE_TOL));
        checks.push(check("2 C1 A1^-1 = 0", term, EXAMPLE_TOL));
    }

    let mut notes = fx.notes();
    for c in fx.jost_corrections() {
        let k = &ks[0];
        let r = exact_diff(&fx.displayed_jost(k), &fx.jost(k));
        notes.push(format!(
            "displayed {} differs from the corrected one by {r:e} at k = 1 (entry ({}, {}))",
            c.what, c.row, c.col
        ));
    }
    if !fx.smatrix_is_reference() {
        let printed = fx.displayed_s0();
        let inv = linalg::max_abs_diff(&field::to_c64_matrix(&(&printed * &printed)), &eye(fx.n()));
        let gap = exact_diff(&printed, &s0_target);
        notes
            .push(format!("displayed S(0): max |S(0)^2 - I| = {inv:e}, max entry difference from the limit = {gap:e}"));
    }

    let pass = all_pass(&checks);
    let p = fx.params;
    let names = fx.id.parameter_names();
    let mut params = Map::new();
    for (name, value) in [("a", p.a), ("b", p.b), ("c", p.c)] {
        if names.contains(&name) {
            params.insert(name.into(), json!(value));
        }
    }
    Ok(json!({
        "id": fx.id.as_str(),
        "mode": mode.as_str(),
        "parameters": params,
        "pass": pass,
        "checks": checks,
        "S0": output::matrix(&z.s0.s),
        "S0_target": exact_matrix_text(&s0_target),
        "notes": notes,
    }))
}

pub fn run_example(id: &str, overrides: [Option<f64>; 3], mode: JordanMode) -> CliResult<Report> {
    let id = FixtureId::parse(id).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown example {id:?}; expected one of delta-prime, kirchhoff, xor-gate, two-chain (or 7.1 to 7.4)"
        ))
    })?;
    let d = id.default_params();
    let params =
        Params { a: overrides[0].unwrap_or(d.a), b: overrides[1].unwrap_or(d.b), c: overrides[2].unwrap_or(d.c) };
    let fx = Fixture::new(id, params)?;
    let v = example_report(&fx, mode)?;
    let code = if v["pass"] == Value::Bool(true) { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Report::json(&v, code))
}
