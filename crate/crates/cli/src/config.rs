//! Job configuration: JSON schema, field-path errors and conversion to solver inputs.

use halfline_core::bc::{self, BCPair, Convention, Formulation, UnitaryBC, ValidationReport};
use halfline_core::linalg::{self, c, CMat};
use halfline_core::potential::{Piece, Potential};
use halfline_core::solver::{AnchorPoint, SolverConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// A matrix entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    #[serde(rename = "V")]
    pub v: MatrixSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub n: usize,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
}

/// One of `{A, B, formulation}`, `{angles}` or `{U, convention}`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSpec {
    pub n: Option<usize>,
    pub formulation: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<MatrixSpec>,
    #[serde(rename = "B")]
    pub b: Option<MatrixSpec>,
    pub angles: Option<Vec<f64>>,
    #[serde(rename = "U")]
    pub u: Option<MatrixSpec>,
    pub convention: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct KGrid {
    pub k_min: f64,
    pub k_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AnchorSpec {
    Keyword(AnchorKeyword),
    At(f64),
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum AnchorKeyword {
    Auto,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Format,
    pub path: String,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_step: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub potential: Option<PotentialSpec>,
    pub bc: BcSpec,
    pub kgrid: Option<KGrid>,
    pub anchor: Option<AnchorSpec>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Raw boundary data before any validity check.
#[derive(Debug, Clone)]
pub enum RawBc {
    Pair { formulation: Formulation, a: CMat, b: CMat },
    Angles(Vec<f64>),
    Unitary { u: CMat, convention: Convention },
}

/// Parses and schema-checks a config; semantic checks run in [`JobConfig::validate`].
pub fn parse_config(text: &str) -> CliResult<JobConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: JobConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Validation(format!("{path}: {}", e.into_inner()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn to_matrix(spec: &MatrixSpec, path: &str) -> CliResult<CMat> {
    let rows = spec.len();
    let cols = spec.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::Validation(format!("{path}: matrix is empty")));
    }
    if let Some(i) = spec.iter().position(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{path}[{i}]: row has {} entries, expected {cols}", spec[i].len())));
    }
    let m = CMat::from_fn(rows, cols, |i, j| match spec[i][j] {
        Entry::Real(x) => c(x, 0.0),
        Entry::Complex([re, im]) => c(re, im),
    });
    if !linalg::is_finite(&m) {
        return Err(CliError::Validation(format!("{path}: entries must be finite")));
    }
    Ok(m)
}

fn square(m: CMat, n: Option<usize>, path: &str) -> CliResult<CMat> {
    if !m.is_square() {
        return Err(CliError::Validation(format!("{path}: expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    if let Some(n) = n {
        if m.nrows() != n {
            return Err(CliError::Validation(format!("{path}: expected {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
        }
    }
    Ok(m)
}

impl BcSpec {
    pub fn raw(&self) -> CliResult<RawBc> {
        let pair = self.a.is_some() || self.b.is_some();
        let forms = [pair, self.angles.is_some(), self.u.is_some()].iter().filter(|&&b| b).count();
        if forms != 1 {
            return Err(CliError::Validation("bc: give exactly one of {A, B}, {angles} or {U, convention}".into()));
        }
        if pair {
            let (Some(a), Some(b)) = (&self.a, &self.b) else {
                return Err(CliError::Validation("bc: both A and B are required".into()));
            };
            if self.convention.is_some() {
                return Err(CliError::Validation("bc.convention: only valid together with U".into()));
            }
            let formulation = match &self.formulation {
                None => Formulation::GeneralAb,
                Some(s) => Formulation::parse(s).ok_or_else(|| {
                    CliError::Validation(format!(
                        "bc.formulation: unknown value {s:?}; expected kostrykin_ab, harmer_unitary, general_ab or normalized"
                    ))
                })?,
            };
            let a = square(to_matrix(a, "bc.A")?, self.n, "bc.A")?;
            let b = square(to_matrix(b, "bc.B")?, Some(a.nrows()), "bc.B")?;
            return Ok(RawBc::Pair { formulation, a, b });
        }
        if self.formulation.is_some() {
            return Err(CliError::Validation("bc.formulation: only valid together with A and B".into()));
        }
        if let Some(angles) = &self.angles {
            if self.convention.is_some() {
                return Err(CliError::Validation("bc.convention: only valid together with U".into()));
            }
            if let Some(n) = self.n {
                if angles.len() != n {
                    return Err(CliError::Validation(format!("bc.angles: expected {n} angles, got {}", angles.len())));
                }
            }
            return Ok(RawBc::Angles(angles.clone()));
        }
        let u = square(to_matrix(self.u.as_ref().expect("checked above"), "bc.U")?, self.n, "bc.U")?;
        let convention = match &self.convention {
            None => Convention::Harmer,
            Some(s) => Convention::parse(s).ok_or_else(|| {
                CliError::Validation(format!("bc.convention: unknown value {s:?}; expected harmer or cosine_sine"))
            })?,
        };
        Ok(RawBc::Unitary { u, convention })
    }
}

impl RawBc {
    pub fn n(&self) -> usize {
        match self {
            RawBc::Pair { a, .. } => a.nrows(),
            RawBc::Angles(t) => t.len(),
            RawBc::Unitary { u, .. } => u.nrows(),
        }
    }

    /// Validity report without building the pair.
    pub fn report(&self) -> CliResult<ValidationReport> {
        Ok(match self {
            RawBc::Pair { formulation: Formulation::KostrykinAb, a, b } => bc::validate_kostrykin(a, b)?,
            RawBc::Pair { formulation: Formulation::Normalized, a, b } => {
                let mut report = bc::validate_ab(a, b)?;
                let residual = bc::normalized_residual(a, b);
                if residual > bc::EPS_CHECK * 10.0 {
                    report.violations.push(bc::Violation { rule: bc::Rule::NormalizedUnitary, residual });
                }
                report
            }
            RawBc::Pair { a, b, .. } => bc::validate_ab(a, b)?,
            RawBc::Angles(_) | RawBc::Unitary { .. } => {
                self.build()?;
                ValidationReport::default()
            }
        })
    }

    pub fn build(&self) -> CliResult<BCPair> {
        let pair = match self {
            RawBc::Pair { formulation, a, b } => BCPair::from_formulation(*formulation, a.clone(), b.clone()),
            RawBc::Angles(t) => BCPair::from_angles(t),
            RawBc::Unitary { u, convention } => {
                UnitaryBC::new(u.clone(), *convention).and_then(|u| BCPair::from_unitary(&u))
            }
        };
        pair.map_err(|e| CliError::from(e).at("bc"))
    }
}

impl PotentialSpec {
    pub fn build(&self) -> CliResult<Potential> {
        if self.n == 0 {
            return Err(CliError::Validation("potential.n: must be positive".into()));
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (i, p) in self.pieces.iter().enumerate() {
            let path = format!("potential.pieces[{i}].V");
            let v = square(to_matrix(&p.v, &path)?, Some(self.n), &path)?;
            let defect = (&v - v.adjoint()).norm();
            if defect > bc::EPS_CHECK * v.norm().max(1.0) {
                return Err(CliError::Validation(format!("{path}: V must be selfadjoint (defect {defect:.3e})")));
            }
            pieces.push(Piece { x_lo: p.x_lo, x_hi: p.x_hi, v });
        }
        Potential::new(self.n, pieces).map_err(|e| CliError::from(e).at("potential.pieces"))
    }
}

impl JobConfig {
    /// Semantic checks beyond the schema.
    pub fn validate(&self) -> CliResult<()> {
        let raw = self.bc.raw()?;
        let pot = self.potential()?;
        if pot.n() != raw.n() {
            return Err(CliError::Validation(format!(
                "potential.n: {} does not match the boundary condition size {}",
                pot.n(),
                raw.n()
            )));
        }
        if let Some(g) = &self.kgrid {
            if !(g.k_min.is_finite() && g.k_min > 0.0) {
                return Err(CliError::Validation(format!(
                    "kgrid.k_min: must be positive, got {}; use the s0 command for k = 0",
                    g.k_min
                )));
            }
            if !(g.k_max.is_finite() && g.k_max >= g.k_min) {
                return Err(CliError::Validation(format!(
                    "kgrid.k_max: must be finite and at least k_min, got {}",
                    g.k_max
                )));
            }
            if g.steps < 1 {
                return Err(CliError::Validation("kgrid.steps: must be at least 1".into()));
            }
        }
        self.solver_config().validate().map_err(|e| CliError::from(e).at("tolerances"))?;
        Ok(())
    }

    /// The configured potential, or `V = 0` sized by the boundary condition.
    pub fn potential(&self) -> CliResult<Potential> {
        match &self.potential {
            Some(p) => p.build(),
            None => Ok(Potential::zero(self.bc.raw()?.n())),
        }
    }

    pub fn bc(&self) -> CliResult<BCPair> {
        self.bc.raw()?.build()
    }

    pub fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        let t = self.tolerances;
        SolverConfig {
            abs_tol: t.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: t.rel_tol.unwrap_or(d.rel_tol),
            max_step: t.max_step.unwrap_or(d.max_step),
            anchor: match self.anchor {
                None | Some(AnchorSpec::Keyword(AnchorKeyword::Auto)) => AnchorPoint::Auto,
                Some(AnchorSpec::At(a)) => AnchorPoint::At(a),
            },
        }
    }
}
