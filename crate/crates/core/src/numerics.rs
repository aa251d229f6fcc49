//! Dense complex linear algebra for the small operators used throughout the crate.
//!
//! Everything here is value-typed: a [`ComplexMatrix`] or [`ComplexVector`] is never
//! mutated after construction through the public API. Sizes stay tiny (at most 27x27),
//! so storage is a flat row-major `Vec`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Index, Mul};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Residual norm below which a Gram-Schmidt candidate counts as dependent.
const DEPENDENT_RESIDUAL: f64 = 1e-8;
/// Allowed norm error for vectors handed to [`complete_to_unitary`].
pub const NORM_TOLERANCE: f64 = 1e-10;

fn check_finite(data: &[C64]) -> Result<()> {
    if data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `(cos θ, sin θ)`, exact at integer multiples of π/4.
///
/// Rotations by π/4 and π/2 appear everywhere in the analyzers; snapping them keeps
/// printed entries such as 1/√2 bit-identical instead of one ulp apart.
pub fn cos_sin(theta: f64) -> (f64, f64) {
    let k = (theta / FRAC_PI_4).round();
    if (theta - k * FRAC_PI_4).abs() <= 4.0 * f64::EPSILON * theta.abs().max(1.0) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match (k as i64).rem_euclid(8) {
            0 => (1.0, 0.0),
            1 => (h, h),
            2 => (0.0, 1.0),
            3 => (-h, h),
            4 => (-1.0, 0.0),
            5 => (-h, -h),
            6 => (0.0, -1.0),
            _ => (h, -h),
        }
    } else {
        (theta.cos(), theta.sin())
    }
}

/// `e^{iθ}` using [`cos_sin`].
pub fn phase(theta: f64) -> C64 {
    let (c, s) = cos_sin(theta);
    C64::new(c, s)
}

/// A complex column vector of amplitudes.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_k` (0-based `k`).
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::PortOutOfRange { port: k, dim });
        }
        let mut entries = vec![ZERO; dim];
        entries[k] = ONE;
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }

    /// The vector as an `n x 1` matrix.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim(),
            cols: 1,
            data: self.entries.clone(),
        }
    }

    /// Checks that the norm is 1 within `tol`.
    pub fn ensure_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol {
            Err(Error::NotNormalized(n))
        } else {
            Ok(())
        }
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// On-disk matrix layout: `{"rows": R, "cols": C, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;
    fn try_from(f: MatrixFile) -> Result<Self> {
        let data = f.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::new(f.rows, f.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixFile {
    fn from(m: ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::BadLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![ONE; n])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (k, &z) in entries.iter().enumerate() {
            m.data[k * n + k] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(&entries.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Builds a matrix from a vector list used as columns.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, ComplexVector::dim);
        if columns.iter().any(|c| c.dim() != rows) {
            return Err(Error::DimMismatch("columns of differing length".into()));
        }
        let mut data = vec![ZERO; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, &z) in col.entries().iter().enumerate() {
                data[i * cols + j] = z;
            }
        }
        Self::new(rows, cols, data)
    }

    /// `n x n` identity with `block` written onto rows/columns `(p, q)`, 0-based.
    pub fn embed(block: &ComplexMatrix, p: usize, q: usize, n: usize) -> Result<Self> {
        if block.shape() != (2, 2) {
            return Err(Error::ShapeMismatch(block.shape(), (2, 2)));
        }
        if p >= q || q >= n {
            return Err(Error::PortOutOfRange { port: q.max(p), dim: n });
        }
        let mut m = Self::identity(n);
        m.data[p * n + p] = block[(0, 0)];
        m.data[p * n + q] = block[(0, 1)];
        m.data[q * n + p] = block[(1, 0)];
        m.data[q * n + q] = block[(1, 1)];
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> ComplexVector {
        ComplexVector {
            entries: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = vec![ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out = &mut data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(self.shape(), rhs.shape()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(self.shape(), rhs.shape()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimMismatch(format!(
                "{}x{} matrix applied to {}-vector",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(ComplexVector { entries })
    }

    /// Largest entrywise modulus of `self - other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        max_abs_diff(&self.data, &other.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .expect("non-empty range");
            if a[pivot * n + k] == ZERO {
                return Ok(ZERO);
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det *= p;
            for i in k + 1..n {
                let factor = a[i * n + k] / p;
                if factor == ZERO {
                    continue;
                }
                for j in k..n {
                    let upper = a[k * n + j];
                    a[i * n + j] -= factor * upper;
                }
            }
        }
        Ok(det)
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("incompatible matrix shapes")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Kronecker product: `(a⊗b)[i·rb+k][j·cb+l] = a[i][j]·b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let rows = ra * rb;
    let cols = ca * cb;
    let mut data = vec![ZERO; rows * cols];
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    data[(i * rb + k) * cols + j * cb + l] = x * b[(k, l)];
                }
            }
        }
    }
    ComplexMatrix { rows, cols, data }
}

/// Kronecker product of vectors; the leftmost factor is the most significant index.
pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let entries = a
        .entries()
        .iter()
        .flat_map(|x| b.entries().iter().map(move |y| x * y))
        .collect();
    ComplexVector { entries }
}

/// Kronecker product of a non-empty list of matrices, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, m| kron(&acc, m))
}

/// `|v⟩⟨v|`.
pub fn dyadic(v: &ComplexVector) -> Result<ComplexMatrix> {
    if v.entries().iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroVector);
    }
    let n = v.dim();
    let mut data = Vec::with_capacity(n * n);
    for a in v.entries() {
        for b in v.entries() {
            data.push(a * b.conj());
        }
    }
    Ok(ComplexMatrix { rows: n, cols: n, data })
}

/// Max entrywise deviation of `m†m` from the identity.
pub fn unitarity_deviation(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let gram = &m.adjoint() * m;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows())))
}

/// Returns `Err(NotUnitary)` when the deviation exceeds `tol`.
pub fn ensure_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let dev = unitarity_deviation(m)?;
    if dev > tol {
        Err(Error::NotUnitary(dev))
    } else {
        Ok(())
    }
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    (a * b).try_sub(&(b * a))
}

/// Orthonormalizes `v` against `basis` (modified Gram-Schmidt, two passes).
/// Returns `None` when the residual norm drops below the dependence threshold.
fn orthonormalize_against(v: &ComplexVector, basis: &[ComplexVector]) -> Option<ComplexVector> {
    let mut r = v.entries().to_vec();
    for _ in 0..2 {
        for b in basis {
            let proj: C64 = b.entries().iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
            for (ri, bi) in r.iter_mut().zip(b.entries()) {
                *ri -= proj * bi;
            }
        }
    }
    let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < DEPENDENT_RESIDUAL {
        return None;
    }
    Some(ComplexVector {
        entries: r.into_iter().map(|z| z / norm).collect(),
    })
}

/// Seeded Haar-like random unitary: a Gaussian complex matrix with Gram-Schmidt
/// orthonormalized columns. Same `(n, seed)` gives bitwise identical output.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns: Vec<ComplexVector> = Vec::with_capacity(n);
    while columns.len() < n {
        let entries: Vec<C64> = (0..n)
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        if let Some(col) = orthonormalize_against(&ComplexVector { entries }, &columns) {
            columns.push(col);
        }
    }
    ComplexMatrix::from_columns(&columns).expect("square by construction")
}

/// Completes a unit vector to a unitary whose column `position` (0-based) is `col`.
///
/// The other columns are standard basis vectors orthonormalized against `col` and each
/// other, taken in index order and skipping dependent candidates.
pub fn complete_to_unitary(col: &ComplexVector, position: usize) -> Result<ComplexMatrix> {
    let n = col.dim();
    if position >= n {
        return Err(Error::PortOutOfRange { port: position, dim: n });
    }
    col.ensure_normalized(NORM_TOLERANCE)?;
    let mut basis = vec![col.clone()];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let candidate = ComplexVector::basis(n, k)?;
        if let Some(v) = orthonormalize_against(&candidate, &basis) {
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), n);
    let mut rest = basis.drain(1..);
    let columns: Vec<ComplexVector> = (0..n)
        .map(|j| {
            if j == position {
                col.clone()
            } else {
                rest.next().expect("n columns")
            }
        })
        .collect();
    ComplexMatrix::from_columns(&columns)
}

/// Anything that is a flat list of amplitudes with a shape.
pub trait Amplitudes {
    fn shape(&self) -> (usize, usize);
    fn amplitudes(&self) -> &[C64];
}

impl Amplitudes for ComplexMatrix {
    fn shape(&self) -> (usize, usize) {
        ComplexMatrix::shape(self)
    }
    fn amplitudes(&self) -> &[C64] {
        self.entries()
    }
}

impl Amplitudes for ComplexVector {
    fn shape(&self) -> (usize, usize) {
        (self.dim(), 1)
    }
    fn amplitudes(&self) -> &[C64] {
        self.entries()
    }
}

/// Unit-modulus `c` minimizing `a - c·b` at the largest-magnitude entry of `b`.
pub fn relative_phase<T: Amplitudes>(a: &T, b: &T) -> Result<Option<C64>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(a.shape(), b.shape()));
    }
    let (k, bk) = b
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty");
    let ak = a.amplitudes()[k];
    if bk.norm() == 0.0 || ak.norm() == 0.0 {
        return Ok(None);
    }
    let c = ak / bk;
    Ok(Some(c / c.norm()))
}

/// True iff some unit-modulus `c` gives `max|a - c·b| ≤ tol`.
pub fn equal_up_to_global_phase<T: Amplitudes>(a: &T, b: &T, tol: f64) -> Result<bool> {
    let c = match relative_phase(a, b)? {
        Some(c) => c,
        None => {
            let worst = a.amplitudes().iter().chain(b.amplitudes()).map(|z| z.norm());
            return Ok(worst.fold(0.0, f64::max) <= tol);
        }
    };
    let dev = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - c * y).norm())
        .fold(0.0, f64::max);
    Ok(dev <= tol)
}

/// Values below this magnitude print as `0`.
pub const PRINT_ZERO: f64 = 1e-14;

/// Decimal text with 12 significant digits, trailing zeros trimmed.
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < PRINT_ZERO {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32 + 1;
    let decimals = (12 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}
