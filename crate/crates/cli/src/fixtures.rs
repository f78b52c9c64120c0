//! Worked examples with free potential, stored as exact closed forms.
//!
//! Every matrix is kept as displayed in the reference material, including two
//! entries known to be inconsistent; the corrections are explicit and reported.

use halfline_core::bc::BCPair;
use halfline_core::field::{self, gq, GaussQ};
use halfline_core::linalg::c;
use nalgebra::DMatrix;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureId {
    DeltaPrime,
    Kirchhoff,
    XorGate,
    TwoChain,
}

impl FixtureId {
    pub const ALL: [FixtureId; 4] =
        [FixtureId::DeltaPrime, FixtureId::Kirchhoff, FixtureId::XorGate, FixtureId::TwoChain];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "delta-prime" | "7.1" => Some(FixtureId::DeltaPrime),
            "kirchhoff" | "7.2" => Some(FixtureId::Kirchhoff),
            "xor-gate" | "7.3" => Some(FixtureId::XorGate),
            "two-chain" | "7.4" => Some(FixtureId::TwoChain),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureId::DeltaPrime => "delta-prime",
            FixtureId::Kirchhoff => "kirchhoff",
            FixtureId::XorGate => "xor-gate",
            FixtureId::TwoChain => "two-chain",
        }
    }

    pub fn default_params(self) -> Params {
        match self {
            FixtureId::DeltaPrime => Params { a: 2.0, b: 0.0, c: 0.0 },
            FixtureId::Kirchhoff => Params { a: 0.0, b: 0.0, c: 0.0 },
            FixtureId::XorGate | FixtureId::TwoChain => Params { a: 1.0, b: 1.0, c: 1.0 },
        }
    }

    /// Parameter names the fixture depends on.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            FixtureId::DeltaPrime | FixtureId::XorGate => &["a"],
            FixtureId::Kirchhoff => &[],
            FixtureId::TwoChain => &["a", "b", "c"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Expected zero-energy structure.
#[derive(Debug, Clone)]
pub struct Structure {
    pub mu: usize,
    pub nu: usize,
    pub p1: DMatrix<GaussQ>,
    pub p2: DMatrix<GaussQ>,
}

/// Displayed blocks; `None` marks a block that depends on an irrational basis.
#[derive(Debug, Clone)]
pub struct Blocks {
    pub a1: DMatrix<GaussQ>,
    pub b1: Option<DMatrix<GaussQ>>,
    pub c1: Option<DMatrix<GaussQ>>,
    pub d0: DMatrix<GaussQ>,
}

/// A displayed entry replaced by its recomputed value.
#[derive(Debug, Clone)]
pub struct Correction {
    pub what: &'static str,
    pub row: usize,
    pub col: usize,
    pub displayed: &'static str,
    pub corrected: &'static str,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: FixtureId,
    pub params: Params,
    a: GaussQ,
    b: GaussQ,
    c: GaussQ,
}

fn rat(num: i64, den: i64) -> GaussQ {
    gq(num, 0, den)
}

fn imag(num: i64, den: i64) -> GaussQ {
    gq(0, num, den)
}

fn zero() -> GaussQ {
    rat(0, 1)
}

fn one() -> GaussQ {
    rat(1, 1)
}

fn mat(rows: usize, cols: usize, entries: Vec<GaussQ>) -> DMatrix<GaussQ> {
    assert_eq!(entries.len(), rows * cols);
    DMatrix::from_row_iterator(rows, cols, entries)
}

fn exact(x: f64, name: &str) -> CliResult<GaussQ> {
    field::gq_from_c64(c(x, 0.0)).ok_or_else(|| CliError::Validation(format!("parameter {name} must be finite")))
}

pub fn permutation(rows: &[usize]) -> DMatrix<GaussQ> {
    let n = rows.len();
    let mut p = DMatrix::from_element(n, n, zero());
    for (i, &j) in rows.iter().enumerate() {
        p[(i, j)] = one();
    }
    p
}

impl Fixture {
    pub fn new(id: FixtureId, params: Params) -> CliResult<Self> {
        let (a, b, c) = (exact(params.a, "a")?, exact(params.b, "b")?, exact(params.c, "c")?);
        let needs_nonzero_a = id == FixtureId::XorGate;
        if needs_nonzero_a && params.a == 0.0 {
            return Err(CliError::Validation("parameter a must be nonzero".into()));
        }
        Ok(Self { id, params, a, b, c })
    }

    pub fn with_defaults(id: FixtureId) -> Self {
        Self::new(id, id.default_params()).expect("default parameters are valid")
    }

    pub fn n(&self) -> usize {
        match self.id {
            FixtureId::XorGate => 4,
            _ => 3,
        }
    }

    /// Exact `(A, B)`.
    pub fn bc_exact(&self) -> (DMatrix<GaussQ>, DMatrix<GaussQ>) {
        let (z, o) = (zero(), one());
        let m = |v: i64| rat(v, 1);
        match self.id {
            FixtureId::DeltaPrime => (
                mat(
                    3,
                    3,
                    vec![
                        o.clone(),
                        z.clone(),
                        -self.a.clone(),
                        m(-1),
                        o.clone(),
                        z.clone(),
                        z.clone(),
                        m(-1),
                        z.clone(),
                    ],
                ),
                mat(3, 3, vec![z.clone(), z.clone(), m(-1), z.clone(), z.clone(), m(-1), z.clone(), z.clone(), m(-1)]),
            ),
            FixtureId::Kirchhoff => (
                mat(
                    3,
                    3,
                    vec![
                        z.clone(),
                        z.clone(),
                        o.clone(),
                        z.clone(),
                        z.clone(),
                        o.clone(),
                        z.clone(),
                        z.clone(),
                        o.clone(),
                    ],
                ),
                mat(
                    3,
                    3,
                    vec![m(-1), z.clone(), z.clone(), o.clone(), m(-1), z.clone(), z.clone(), o.clone(), z.clone()],
                ),
            ),
            FixtureId::XorGate => {
                let ia = imag(1, 1) / self.a.clone();
                let h = ia.clone() * rat(1, 2);
                (
                    mat(
                        4,
                        4,
                        vec![
                            ia.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            ia,
                            z.clone(),
                            h.clone(),
                            z.clone(),
                            z.clone(),
                            h.clone(),
                            h.clone(),
                            z.clone(),
                            z.clone(),
                            h.clone(),
                            h,
                        ],
                    ),
                    mat(
                        4,
                        4,
                        vec![
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            z.clone(),
                            rat(-1, 2),
                            rat(1, 2),
                            z.clone(),
                            z.clone(),
                            rat(1, 2),
                            rat(-1, 2),
                        ],
                    ),
                )
            }
            FixtureId::TwoChain => (
                mat(
                    3,
                    3,
                    vec![
                        m(2),
                        o.clone(),
                        self.a.clone(),
                        z.clone(),
                        z.clone(),
                        self.b.clone(),
                        o.clone(),
                        o.clone(),
                        self.c.clone(),
                    ],
                ),
                mat(3, 3, vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o, z.clone(), z.clone(), z]),
            ),
        }
    }

    pub fn bc(&self) -> CliResult<BCPair> {
        let (a, b) = self.bc_exact();
        Ok(BCPair::new(field::to_c64_matrix(&a), field::to_c64_matrix(&b))?)
    }

    /// `J(k)` exactly as displayed.
    pub fn displayed_jost(&self, k: &GaussQ) -> DMatrix<GaussQ> {
        let ik = imag(1, 1) * k.clone();
        let z = zero;
        match self.id {
            FixtureId::DeltaPrime => mat(
                3,
                3,
                vec![
                    -ik.clone(),
                    z(),
                    rat(-1, 1) + ik.clone() * self.a.clone(),
                    ik.clone(),
                    -ik.clone(),
                    rat(-1, 1),
                    z(),
                    ik,
                    rat(-1, 1),
                ],
            ),
            FixtureId::Kirchhoff => {
                mat(3, 3, vec![rat(-1, 1), z(), -ik.clone(), one(), rat(-1, 1), -ik.clone(), z(), one(), -ik])
            }
            FixtureId::XorGate => {
                let a = self.a.clone();
                let two_a = a.clone() * rat(2, 1);
                let plus = (k.clone() + a.clone()) / two_a.clone();
                let minus = (k.clone() - a.clone()) / two_a.clone();
                mat(
                    4,
                    4,
                    vec![
                        k.clone() / a.clone(),
                        z(),
                        z(),
                        z(),
                        z(),
                        k.clone() / a,
                        z(),
                        k.clone() / two_a,
                        z(),
                        z(),
                        plus.clone(),
                        plus.clone(),
                        z(),
                        z(),
                        plus,
                        minus,
                    ],
                )
            }
            FixtureId::TwoChain => mat(
                3,
                3,
                vec![
                    -ik.clone() * rat(2, 1),
                    -ik.clone(),
                    -ik.clone() * self.a.clone(),
                    z(),
                    z(),
                    one() - ik.clone() * self.b.clone(),
                    -ik.clone(),
                    -ik.clone(),
                    -ik * self.c.clone(),
                ],
            ),
        }
    }

    pub fn jost_corrections(&self) -> Vec<Correction> {
        match self.id {
            FixtureId::XorGate => {
                vec![Correction { what: "J(k)", row: 3, col: 3, displayed: "(k+a)/(2a)", corrected: "(k-a)/(2a)" }]
            }
            _ => Vec::new(),
        }
    }

    /// Displayed `J(k)` with the known corrections applied.
    pub fn jost(&self, k: &GaussQ) -> DMatrix<GaussQ> {
        let mut j = self.displayed_jost(k);
        if self.id == FixtureId::XorGate {
            let a = self.a.clone();
            j[(2, 2)] = (k.clone() - a.clone()) / (a * rat(2, 1));
        }
        j
    }

    /// Displayed `S(k)`; for the Kirchhoff fixture this is the inconsistent constant matrix.
    pub fn displayed_smatrix(&self, k: &GaussQ) -> DMatrix<GaussQ> {
        let i = imag(1, 1);
        match self.id {
            FixtureId::DeltaPrime => {
                let ak = self.a.clone() * k.clone();
                let den = i.clone() * rat(3, 1) + ak.clone();
                let diag = (i.clone() + ak) / den.clone();
                let off = (i * rat(-2, 1)) / den;
                DMatrix::from_fn(3, 3, |r, s| if r == s { diag.clone() } else { off.clone() })
            }
            FixtureId::Kirchhoff => self.displayed_s0(),
            FixtureId::XorGate => permutation(&[0, 1, 3, 2]),
            FixtureId::TwoChain => {
                let bk = self.b.clone() * k.clone();
                let mut s = field::identity::<GaussQ>(3);
                s[(1, 1)] = (bk.clone() - i.clone()) / (bk + i);
                s
            }
        }
    }

    /// Whether the displayed `S(k)` and `S(0)` are consistent targets.
    pub fn smatrix_is_reference(&self) -> bool {
        self.id != FixtureId::Kirchhoff
    }

    pub fn displayed_s0(&self) -> DMatrix<GaussQ> {
        match self.id {
            FixtureId::DeltaPrime => DMatrix::from_fn(3, 3, |r, s| if r == s { rat(1, 3) } else { rat(-2, 3) }),
            FixtureId::Kirchhoff => mat(
                3,
                3,
                vec![
                    rat(-1, 3),
                    rat(2, 3),
                    rat(2, 3),
                    rat(2, 3),
                    rat(-1, 3),
                    rat(2, 3),
                    rat(2, 3),
                    rat(-2, 3),
                    rat(1, 3),
                ],
            ),
            FixtureId::XorGate => permutation(&[0, 1, 3, 2]),
            FixtureId::TwoChain => {
                let mut s = field::identity::<GaussQ>(3);
                s[(1, 1)] = rat(-1, 1);
                s
            }
        }
    }

    pub fn structure(&self) -> Structure {
        let id = |n: usize| field::identity::<GaussQ>(n);
        match self.id {
            FixtureId::DeltaPrime => Structure { mu: 2, nu: 2, p1: id(3), p2: id(3) },
            FixtureId::Kirchhoff => Structure { mu: 1, nu: 1, p1: id(3), p2: id(3) },
            FixtureId::XorGate => Structure { mu: 3, nu: 3, p1: id(4), p2: id(4) },
            FixtureId::TwoChain => Structure { mu: 2, nu: 3, p1: id(3), p2: permutation(&[0, 2, 1]) },
        }
    }

    /// Displayed Jordan basis, when it is rational.
    pub fn displayed_basis(&self) -> Option<DMatrix<GaussQ>> {
        let (z, o) = (zero(), one());
        match self.id {
            FixtureId::DeltaPrime => {
                Some(mat(3, 3, vec![o.clone(), z.clone(), o.clone(), z.clone(), o.clone(), o.clone(), z.clone(), z, o]))
            }
            FixtureId::Kirchhoff => None,
            FixtureId::XorGate => Some(mat(
                4,
                4,
                vec![
                    o.clone(),
                    z.clone(),
                    z.clone(),
                    z.clone(),
                    z.clone(),
                    o.clone(),
                    z.clone(),
                    z.clone(),
                    z.clone(),
                    z.clone(),
                    o.clone(),
                    rat(-1, 1),
                    z.clone(),
                    z,
                    o.clone(),
                    o,
                ],
            )),
            FixtureId::TwoChain => Some(field::identity::<GaussQ>(3)),
        }
    }

    pub fn displayed_blocks(&self) -> Blocks {
        let i = imag(1, 1);
        let z = zero;
        match self.id {
            FixtureId::DeltaPrime => Blocks {
                a1: mat(2, 2, vec![imag(-1, 1), imag(-1, 1), imag(1, 1), imag(-2, 1)]),
                b1: Some(mat(2, 1, vec![i * (self.a.clone() - rat(2, 1)), imag(-1, 1)])),
                c1: Some(mat(1, 2, vec![z(), imag(1, 1)])),
                d0: mat(1, 1, vec![rat(-1, 1)]),
            },
            FixtureId::Kirchhoff => Blocks {
                a1: mat(1, 1, vec![imag(-3, 1)]),
                b1: None,
                c1: None,
                d0: mat(2, 2, vec![rat(-1, 1), one(), z(), rat(-1, 1)]),
            },
            FixtureId::XorGate => {
                let inv = one() / self.a.clone();
                let half = inv.clone() * rat(1, 2);
                Blocks {
                    a1: mat(3, 3, vec![inv.clone(), z(), z(), z(), inv.clone(), half.clone(), z(), z(), inv]),
                    b1: Some(mat(3, 1, vec![z(), half, z()])),
                    c1: Some(mat(1, 3, vec![z(), z(), z()])),
                    d0: mat(1, 1, vec![rat(-1, 1)]),
                }
            }
            FixtureId::TwoChain => Blocks {
                a1: mat(2, 2, vec![imag(-2, 1), imag(-1, 1), imag(-1, 1), imag(-1, 1)]),
                b1: Some(mat(2, 1, vec![-i.clone() * self.a.clone(), -i * self.c.clone()])),
                c1: Some(mat(1, 2, vec![z(), z()])),
                d0: mat(1, 1, vec![one()]),
            },
        }
    }

    /// Exact `-J(-k) J(k)^{-1}` from the corrected displayed `J`.
    pub fn smatrix_from_jost(&self, k: &GaussQ) -> Option<DMatrix<GaussQ>> {
        let j = self.jost(k);
        let jn = self.jost(&(-k.clone()));
        Some(-(jn * field::inverse(&j, 0.0)?))
    }

    /// `lim_{k -> 0} S(k)` approximated by exact evaluation at `k = 10^-12`.
    pub fn s0_oracle(&self) -> Option<DMatrix<GaussQ>> {
        self.smatrix_from_jost(&rat(1, 1_000_000_000_000))
    }

    /// `S(0)` comparison target: the displayed value when consistent, else the oracle.
    pub fn s0_target(&self) -> DMatrix<GaussQ> {
        if self.smatrix_is_reference() {
            self.displayed_s0()
        } else {
            self.s0_oracle().expect("fixture J(k) is invertible for small k")
        }
    }

    pub fn sample_ks() -> [GaussQ; 2] {
        [rat(1, 1), imag(1, 2)]
    }

    pub fn notes(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .jost_corrections()
            .iter()
            .map(|c| {
                format!(
                    "{} entry ({}, {}) is displayed as {}; B - ikA gives {}, which is used for comparison",
                    c.what, c.row, c.col, c.displayed, c.corrected
                )
            })
            .collect();
        if !self.smatrix_is_reference() {
            out.push(
                "displayed S(k) = S(0) has last row (2/3, -2/3, 1/3); it is neither symmetric nor an involution, \
                 so S(0) is compared with the k -> 0 limit of -J(-k) J(k)^{-1} built from the displayed J(k)"
                    .into(),
            );
        }
        out
    }
}
