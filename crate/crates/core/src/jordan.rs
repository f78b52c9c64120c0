//! Jordan decomposition `M = S J S^{-1}` with zero-eigenvalue chains first.
//!
//! Both backends share the staircase construction: for each eigenvalue
//! `lambda` with `N = M - lambda`, the nested kernels `K_j = ker N^j` are
//! built as `K_j = { x : N x in K_{j-1} }`, and chain tops are chosen from
//! the top level down. A chain with top `w` at level `l` is stored as
//! `u_1 = N^{l-1} w, ..., u_l = w`.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{self, Field, GaussQ};
use crate::linalg::{self, CMat};

/// Largest condition number accepted for the numeric similarity matrix.
pub const SIMILARITY_COND_CAP: f64 = 1e12;
/// Gaps below this multiple of the clustering radius are ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanMode {
    Exact,
    Numeric,
}

impl JordanMode {
    pub fn as_str(self) -> &'static str {
        match self {
            JordanMode::Exact => "exact",
            JordanMode::Numeric => "numeric",
        }
    }
}

/// Order of chains sharing an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainOrder {
    #[default]
    ShortestFirst,
    LongestFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain<T> {
    pub lambda: T,
    pub len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanOptions {
    /// Absolute clustering radius for eigenvalues.
    pub eps_eig: f64,
    /// Absolute singular-value threshold for kernels and ranks.
    pub eps_rank: f64,
    pub order: ChainOrder,
}

impl JordanOptions {
    /// `eps_eig = 1e-8 scale`, `eps_rank = 1e-10 scale`.
    pub fn scaled(scale: f64) -> Self {
        let s = scale.max(f64::MIN_POSITIVE);
        Self { eps_eig: 1e-8 * s, eps_rank: 1e-10 * s, order: ChainOrder::default() }
    }

    pub fn with_order(mut self, order: ChainOrder) -> Self {
        self.order = order;
        self
    }
}

#[derive(Debug, Clone)]
pub struct JordanData<T: Field> {
    pub m: DMatrix<T>,
    /// Columns are the ordered Jordan basis.
    pub smat: DMatrix<T>,
    /// Rows are the adjoint basis; `sinv smat = I`.
    pub sinv: DMatrix<T>,
    pub chains: Vec<Chain<T>>,
    /// Number of chains for the eigenvalue zero.
    pub mu: usize,
    /// Algebraic multiplicity of zero.
    pub nu: usize,
    pub kappa: usize,
    pub mode: JordanMode,
}

impl<T: Field> JordanData<T> {
    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Column offset of the first vector of every chain.
    pub fn chain_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.chains.len());
        let mut acc = 0;
        for ch in &self.chains {
            out.push(acc);
            acc += ch.len;
        }
        out
    }

    /// Block-diagonal Jordan form in chain order.
    pub fn jordan_matrix(&self) -> DMatrix<T> {
        let n = self.n();
        let mut j = DMatrix::<T>::zeros(n, n);
        for (ch, off) in self.chains.iter().zip(self.chain_offsets()) {
            for i in 0..ch.len {
                j[(off + i, off + i)] = ch.lambda.clone();
                if i + 1 < ch.len {
                    j[(off + i, off + i + 1)] = T::one();
                }
            }
        }
        j
    }

    /// `(|sinv smat - I|, |sinv M smat - J|)` in the Frobenius norm.
    pub fn residuals(&self) -> (f64, f64) {
        let n = self.n();
        let biorth = field::to_c64_matrix(&(&self.sinv * &self.smat)) - linalg::eye(n);
        let form =
            field::to_c64_matrix(&(&self.sinv * &self.m * &self.smat)) - field::to_c64_matrix(&self.jordan_matrix());
        (biorth.norm(), form.norm())
    }

    /// Residual of `(M - lambda) u_1 = 0`, `(M - lambda) u_j = u_{j-1}`.
    pub fn chain_residual(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for (ch, off) in self.chains.iter().zip(self.chain_offsets()) {
            let nmat = &self.m - field::identity::<T>(n) * ch.lambda.clone();
            for j in 0..ch.len {
                let lhs = &nmat * self.smat.column(off + j);
                let rhs = if j == 0 { DVector::<T>::zeros(n) } else { self.smat.column(off + j - 1).into_owned() };
                let d = field::to_c64_matrix(&DMatrix::from_column_slice(n, 1, (lhs - rhs).as_slice()));
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Multiplies every vector of chain `alpha` by `factors[alpha]`.
    pub fn rescale_chains(&self, factors: &[T]) -> Result<Self> {
        if factors.len() != self.chains.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} factors for {} chains",
                factors.len(),
                self.chains.len()
            )));
        }
        let mut out = self.clone();
        for ((ch, off), f) in self.chains.iter().zip(self.chain_offsets()).zip(factors) {
            if f.is_zero() {
                return Err(Error::InvalidArgument("chain scale factor must be nonzero".into()));
            }
            let inv = T::one() / f.clone();
            for j in off..off + ch.len {
                for i in 0..self.n() {
                    out.smat[(i, j)] = self.smat[(i, j)].clone() * f.clone();
                    out.sinv[(j, i)] = self.sinv[(j, i)].clone() * inv.clone();
                }
            }
        }
        Ok(out)
    }

    /// Eigenvalues with their chain lengths, zero chains first.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.chains.iter().flat_map(|ch| std::iter::repeat_n(ch.lambda.to_c64(), ch.len)).collect()
    }
}

/// Chain tops and lengths for one eigenvalue.
fn chains_for<T: Field>(
    m: &DMatrix<T>,
    lambda: &T,
    alg_mult: usize,
    tol: f64,
    order: ChainOrder,
) -> Result<Vec<(usize, DMatrix<T>)>> {
    let n = m.nrows();
    let nmat = m - field::identity::<T>(n) * lambda.clone();
    let mut levels: Vec<DMatrix<T>> = vec![DMatrix::zeros(n, 0)];
    while levels.last().expect("nonempty").ncols() < alg_mult {
        let prev = levels.last().expect("nonempty");
        let d = prev.ncols();
        let mut wide = DMatrix::<T>::zeros(n, n + d);
        wide.view_mut((0, 0), (n, n)).copy_from(&nmat);
        for j in 0..d {
            for i in 0..n {
                wide[(i, n + j)] = -prev[(i, j)].clone();
            }
        }
        let null = T::null_space(&wide, tol);
        let x_part = null.rows(0, n).into_owned();
        let next = field::canonical_basis(&x_part, tol);
        if next.ncols() <= d {
            return Err(Error::Jordan(format!("generalized eigenspace stalled at dimension {d} of {alg_mult}")));
        }
        if next.ncols() > alg_mult {
            return Err(Error::Jordan(format!(
                "generalized eigenspace dimension {} exceeds multiplicity {alg_mult}",
                next.ncols()
            )));
        }
        levels.push(next);
    }

    let depth = levels.len() - 1;
    // Each entry: (length, vectors u_1..u_len as columns).
    let mut chains: Vec<(usize, DMatrix<T>)> = Vec::new();
    for level in (1..=depth).rev() {
        let mut span = levels[level - 1].clone();
        let push = |span: &mut DMatrix<T>, v: &DVector<T>| {
            let mut s = DMatrix::<T>::zeros(n, span.ncols() + 1);
            s.view_mut((0, 0), span.shape()).copy_from(span);
            s.set_column(span.ncols(), v);
            *span = s;
        };
        for (_, vecs) in &chains {
            push(&mut span, &vecs.column(level - 1).into_owned());
        }
        let candidates = &levels[level];
        for c in 0..candidates.ncols() {
            let w = candidates.column(c).into_owned();
            if !field::extends_span(&span, &w, tol) {
                continue;
            }
            push(&mut span, &w);
            let mut vecs = DMatrix::<T>::zeros(n, level);
            let mut v = w;
            for j in (0..level).rev() {
                vecs.set_column(j, &v);
                v = &nmat * v;
            }
            chains.push((level, vecs));
        }
    }
    let total: usize = chains.iter().map(|c| c.0).sum();
    if total != alg_mult {
        return Err(Error::Jordan(format!("chains cover {total} of {alg_mult} generalized eigenvectors")));
    }
    match order {
        ChainOrder::ShortestFirst => chains.sort_by_key(|c| c.0),
        ChainOrder::LongestFirst => chains.sort_by_key(|c| std::cmp::Reverse(c.0)),
    }
    Ok(chains)
}

fn assemble<T: Field>(
    m: &DMatrix<T>,
    eigen: Vec<(T, usize)>,
    tol: f64,
    order: ChainOrder,
    mode: JordanMode,
) -> Result<JordanData<T>> {
    let n = m.nrows();
    let mut smat = DMatrix::<T>::zeros(n, n);
    let mut chains = Vec::new();
    let mut col = 0;
    let (mut mu, mut nu) = (0, 0);
    for (lambda, mult) in eigen {
        let is_zero = lambda.is_zero();
        for (len, vecs) in chains_for(m, &lambda, mult, tol, order)? {
            smat.view_mut((0, col), (n, len)).copy_from(&vecs);
            col += len;
            if is_zero {
                mu += 1;
                nu += len;
            }
            chains.push(Chain { lambda: lambda.clone(), len });
        }
    }
    if col != n {
        return Err(Error::Jordan(format!("basis has {col} vectors, expected {n}")));
    }
    let inv_tol = if T::EXACT { 0.0 } else { f64::EPSILON * field::max_magnitude(&smat) };
    let sinv = field::inverse(&smat, inv_tol).ok_or_else(|| Error::Jordan("Jordan basis is singular".into()))?;
    let kappa = chains.len();
    Ok(JordanData { m: m.clone(), smat, sinv, chains, mu, nu, kappa, mode })
}

/// Sorts zero first, then by real and imaginary part.
fn eigen_order(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    let za = a == Complex64::new(0.0, 0.0);
    let zb = b == Complex64::new(0.0, 0.0);
    zb.cmp(&za).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im))
}

/// Single-linkage clusters of the spectrum; returns (mean, size) per cluster.
pub fn cluster_eigenvalues(values: &[Complex64], radius: f64) -> Result<Vec<(Complex64, usize)>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(values[i]),
            None => groups.push((r, vec![values[i]])),
        }
    }
    let limit = AMBIGUITY_FACTOR * radius;
    for (a, ga) in groups.iter().enumerate() {
        for gb in &groups[a + 1..] {
            for x in &ga.1 {
                for y in &gb.1 {
                    let gap = (x - y).norm();
                    if gap < limit {
                        return Err(Error::JordanAmbiguous { gap, radius });
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for (_, g) in groups {
        let mean = g.iter().sum::<Complex64>() / g.len() as f64;
        let mag = mean.norm();
        if mag > radius && mag < limit {
            return Err(Error::JordanAmbiguous { gap: mag, radius });
        }
        let lambda = if mag <= radius { Complex64::new(0.0, 0.0) } else { mean };
        out.push((lambda, g.len()));
    }
    out.sort_by(|a, b| eigen_order(a.0, b.0));
    Ok(out)
}

pub fn jordan_form_numeric(m: &CMat, opts: &JordanOptions) -> Result<JordanData<Complex64>> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!("Jordan form needs a square matrix, got {:?}", m.shape())));
    }
    let eig = spectrum(m)?;
    let clusters = cluster_eigenvalues(&eig, opts.eps_eig)?;
    let jd = assemble(m, clusters, opts.eps_rank, opts.order, JordanMode::Numeric)?;
    let k = linalg::cond(&jd.smat);
    if !(k <= SIMILARITY_COND_CAP) {
        return Err(Error::Singular { what: "Jordan basis", cond: k });
    }
    Ok(jd)
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let q = BigRational::new(BigInt::from(h1), BigInt::from(k1));
    let err = (x - h1 as f64 / k1 as f64).abs();
    (err <= 1e-9 * x.abs().max(1.0)).then_some(q)
}

fn kernel_dim_of_power(m: &DMatrix<GaussQ>, lambda: &GaussQ) -> usize {
    let n = m.nrows();
    let nmat = m - field::identity::<GaussQ>(n) * lambda.clone();
    let mut p = field::identity::<GaussQ>(n);
    for _ in 0..n {
        p = &p * &nmat;
    }
    n - field::rank(&p, 0.0)
}

/// Exact decomposition; eigenvalues must be Gaussian rationals.
pub fn jordan_form_exact(m: &DMatrix<GaussQ>, order: ChainOrder) -> Result<JordanData<GaussQ>> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!("Jordan form needs a square matrix, got {:?}", m.shape())));
    }
    let n = m.nrows();
    let approx = field::to_c64_matrix(m);
    let eig = spectrum(&approx)?;
    let scale = approx.norm().max(1.0);
    let clusters = cluster_eigenvalues(&eig, 1e-6 * scale).unwrap_or_else(|_| eig.iter().map(|&z| (z, 1)).collect());

    let mut candidates: Vec<GaussQ> = Vec::new();
    for (z, _) in clusters {
        let re = rationalize(z.re, 1_000_000).ok_or(Error::NotGaussianRational)?;
        let im = rationalize(z.im, 1_000_000).ok_or(Error::NotGaussianRational)?;
        let q = GaussQ::new(re, im);
        if !candidates.contains(&q) {
            candidates.push(q);
        }
    }
    let mut eigen = Vec::new();
    let mut total = 0;
    for q in candidates {
        let d = kernel_dim_of_power(m, &q);
        if d > 0 {
            total += d;
            eigen.push((q, d));
        }
    }
    if total != n {
        return Err(Error::NotGaussianRational);
    }
    eigen.sort_by(|a, b| eigen_order(a.0.to_c64(), b.0.to_c64()).then_with(|| exact_cmp(&a.0, &b.0)));
    assemble(m, eigen, 0.0, order, JordanMode::Exact)
}

fn exact_cmp(a: &GaussQ, b: &GaussQ) -> std::cmp::Ordering {
    let za = a.is_zero();
    let zb = b.is_zero();
    zb.cmp(&za).then(a.re.cmp(&b.re)).then(a.im.cmp(&b.im))
}

fn spectrum(m: &CMat) -> Result<Vec<Complex64>> {
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::Jordan("Schur decomposition did not converge".into()))
}
