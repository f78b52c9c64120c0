//! Scalar fields shared by the numeric and exact code paths.
//!
//! The Jordan pipeline and the zero-energy formula are written once over
//! [`Field`] and instantiated for `Complex64` (numeric mode) and for
//! Gaussian rationals [`GaussQ`] (exact mode).

use std::ops::Neg;

use nalgebra::{ClosedAddAssign, ClosedDivAssign, ClosedMulAssign, ClosedSubAssign, DMatrix, DVector, Scalar};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Complex numbers with arbitrary-precision rational parts.
pub type GaussQ = Complex<BigRational>;

pub trait Field:
    Scalar + Zero + One + ClosedAddAssign + ClosedSubAssign + ClosedMulAssign + ClosedDivAssign + Neg<Output = Self>
{
    const EXACT: bool;

    fn magnitude(&self) -> f64;
    fn is_negligible(&self, tol: f64) -> bool;
    fn imag_unit() -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;

    /// Orthogonal complement of the row space, as columns.
    fn null_space(m: &DMatrix<Self>, tol: f64) -> DMatrix<Self> {
        rref_null_space(m, tol)
    }

    /// Rank with absolute threshold `tol` (ignored by exact fields).
    fn rank_of(m: &DMatrix<Self>, tol: f64) -> usize {
        rref(m, tol).1.len()
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn imag_unit() -> Self {
        Complex64::i()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn null_space(m: &DMatrix<Self>, tol: f64) -> DMatrix<Self> {
        svd_null_space(m, tol)
    }

    fn rank_of(m: &DMatrix<Self>, tol: f64) -> usize {
        if m.is_empty() {
            return 0;
        }
        m.clone().singular_values().iter().filter(|&&s| s > tol).count()
    }
}

impl Field for GaussQ {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Gaussian rational `re/den + i im/den`.
pub fn gq(re: i64, im: i64, den: i64) -> GaussQ {
    Complex::new(
        BigRational::new(BigInt::from(re), BigInt::from(den)),
        BigRational::new(BigInt::from(im), BigInt::from(den)),
    )
}

/// Exact conversion of a binary floating-point value.
pub fn gq_from_c64(z: Complex64) -> Option<GaussQ> {
    Some(Complex::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
}

pub fn to_c64_matrix<T: Field>(m: &DMatrix<T>) -> DMatrix<Complex64> {
    m.map(|z| z.to_c64())
}

pub fn adjoint<T: Field>(m: &DMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn scale<T: Field>(m: &DMatrix<T>, s: &T) -> DMatrix<T> {
    m.map(|z| z * s.clone())
}

/// Largest entry magnitude.
pub fn max_magnitude<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(Field::magnitude).fold(0.0, f64::max)
}

fn pick_pivot<T: Field>(m: &DMatrix<T>, col: usize, from_row: usize, tol: f64) -> Option<usize> {
    if T::EXACT {
        (from_row..m.nrows()).find(|&r| !m[(r, col)].is_negligible(tol))
    } else {
        let (best, mag) = (from_row..m.nrows())
            .map(|r| (r, m[(r, col)].magnitude()))
            .fold((from_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > tol).then_some(best)
    }
}

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
///
/// Exact fields pivot on the first nonzero entry; numeric fields use partial
/// pivoting and treat magnitudes at or below `tol` as zero.
pub fn rref<T: Field>(m: &DMatrix<T>, tol: f64) -> (DMatrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r, tol) else {
            for i in r..rows {
                a[(i, c)] = T::zero();
            }
            continue;
        };
        a.swap_rows(r, p);
        let inv = T::one() / a[(r, c)].clone();
        for j in c..cols {
            let v = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(r, j)].clone() * f.clone();
                a[(i, j)] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &DMatrix<T>, tol: f64) -> usize {
    T::rank_of(m, tol)
}

fn rref_null_space<T: Field>(m: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let cols = m.ncols();
    let (r, pivots) = rref(m, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = DMatrix::<T>::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -r[(row, f)].clone();
        }
    }
    basis
}

fn svd_null_space(m: &DMatrix<Complex64>, tol: f64) -> DMatrix<Complex64> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let mut padded = DMatrix::<Complex64>::zeros(rows.max(cols), cols);
    padded.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let null: Vec<usize> = (0..cols).filter(|&i| svd.singular_values[i] <= tol).collect();
    DMatrix::from_fn(cols, null.len(), |i, j| v_t[(null[j], i)].conj())
}

/// Echelon-normalized basis of the column span of `cols`: each returned
/// column has a unit entry at its pivot row and zeros at the other pivots.
pub fn canonical_basis<T: Field>(cols: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let (r, pivots) = rref(&cols.transpose(), tol);
    DMatrix::from_fn(cols.nrows(), pivots.len(), |i, j| r[(j, i)].clone())
}

pub fn inverse<T: Field>(m: &DMatrix<T>, tol: f64) -> Option<DMatrix<T>> {
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    let mut aug = DMatrix::<T>::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = T::one();
    }
    let (r, pivots) = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(DMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Whether `v` lies outside the column span of `basis`.
pub fn extends_span<T: Field>(basis: &DMatrix<T>, v: &DVector<T>, tol: f64) -> bool {
    let before = rank(basis, tol);
    let mut stacked = DMatrix::<T>::zeros(v.len(), basis.ncols() + 1);
    stacked.view_mut((0, 0), basis.shape()).copy_from(basis);
    stacked.set_column(basis.ncols(), v);
    rank(&stacked, tol) > before
}

pub fn identity<T: Field>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}
