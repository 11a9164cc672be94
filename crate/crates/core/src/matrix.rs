//! Small dense complex linear algebra: products, adjoints, Gram matrices and
//! the top singular pair by power iteration.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("inner product of {} and {}", self.dim(), other.dim())));
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// Unit-norm copy. Fails on the zero vector.
    pub fn normalized(&self) -> Result<CVector> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Usage("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self(self.0.iter().map(|z| z / n).collect()))
    }

    pub fn conj(&self) -> CVector {
        Self(self.0.iter().map(Complex64::conj).collect())
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for CVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Usage("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[CVector]) -> Result<Self> {
        let cols = rows.first().map(CVector::dim).unwrap_or(0);
        if rows.iter().any(|r| r.dim() != cols) {
            return Err(Error::Shape("rows of unequal length".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> CVector {
        CVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(Complex64::conj).collect() }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `A x`.
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        if self.cols != x.dim() {
            return Err(Error::Shape(format!("{}x{} applied to {}-vector", self.rows, self.cols, x.dim())));
        }
        Ok(CVector(
            (0..self.rows)
                .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(&x.0).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// `A^dagger A`, the cols x cols Gram matrix.
    pub fn gram_cols(&self) -> CMatrix {
        self.dagger().matmul(self).expect("conformable")
    }

    /// `A A^dagger`, the rows x rows Gram matrix.
    pub fn gram_rows(&self) -> CMatrix {
        self.matmul(&self.dagger()).expect("conformable")
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// Schur test bound on the spectral norm: `sqrt(max row abs-sum * max column abs-sum)`.
    pub fn schur_singular_bound(&self) -> f64 {
        let row_max = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let col_max = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }

    /// Largest singular value and a unit right singular vector, with the
    /// Gram matrix chosen automatically (whichever side is smaller).
    pub fn top_singular(&self, tol: f64, max_iter: usize) -> Result<TopSingular> {
        if self.rows < self.cols {
            self.top_singular_via(GramSide::Rows, tol, max_iter)
        } else {
            self.top_singular_via(GramSide::Cols, tol, max_iter)
        }
    }

    /// Same as [`CMatrix::top_singular`] but with the Gram side forced.
    pub fn top_singular_via(&self, side: GramSide, tol: f64, max_iter: usize) -> Result<TopSingular> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Usage("tolerance must be positive".into()));
        }
        if self.is_zero() {
            return Err(Error::Usage("top singular pair of the zero matrix".into()));
        }
        let gram = match side {
            GramSide::Cols => self.gram_cols(),
            GramSide::Rows => self.gram_rows(),
        };
        let (lambda, vec) = power_iteration(&gram, tol, max_iter)?;
        let sigma = lambda.max(0.0).sqrt();
        let right = match side {
            GramSide::Cols => vec,
            // v = A^dagger u / sigma
            GramSide::Rows => self.dagger().apply(&vec)?.normalized()?,
        };
        Ok(TopSingular { sigma, right })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Which Gram matrix power iteration runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSide {
    /// `A^dagger A` (cols x cols).
    Cols,
    /// `A A^dagger` (rows x rows).
    Rows,
}

#[derive(Debug, Clone)]
pub struct TopSingular {
    pub sigma: f64,
    /// Unit vector maximizing `|A x|`.
    pub right: CVector,
}

/// Dominant eigenpair of a Hermitian positive semidefinite matrix.
///
/// Starts from the normalized all-ones vector and stops once successive
/// Rayleigh quotients agree to `tol` relative to the current estimate.
fn power_iteration(h: &CMatrix, tol: f64, max_iter: usize) -> Result<(f64, CVector)> {
    let n = h.rows();
    let mut x = CVector(vec![Complex64::new(1.0, 0.0); n]).normalized()?;
    let mut lambda = rayleigh(h, &x)?;
    for _ in 0..max_iter {
        let y = h.apply(&x)?;
        if y.norm() == 0.0 {
            // Start vector lies in the kernel; nudge it off deterministically.
            x = CVector((0..n).map(|j| Complex64::new(1.0, (j + 1) as f64 / n as f64)).collect()).normalized()?;
            continue;
        }
        x = y.normalized()?;
        let next = rayleigh(h, &x)?;
        if (next - lambda).abs() <= tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok((next, x));
        }
        lambda = next;
    }
    Err(Error::NonConvergence { iterations: max_iter, last_sigma: lambda.max(0.0).sqrt() })
}

fn rayleigh(h: &CMatrix, x: &CVector) -> Result<f64> {
    Ok(x.inner(&h.apply(x)?)?.re / x.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> CMatrix {
        CMatrix::from_row_major(2, 3, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)])
            .unwrap()
    }

    #[test]
    fn identity_apply() {
        let x = CVector::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)]);
        assert_eq!(CMatrix::identity(3).apply(&x).unwrap(), x);
    }

    #[test]
    fn dagger_involution() {
        let a = sample();
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(a.dagger()[(2, 0)], c(3.0, -0.5));
    }

    #[test]
    fn shape_errors() {
        let a = sample();
        assert!(a.matmul(&a).is_err());
        assert!(a.apply(&CVector::zeros(2)).is_err());
        assert!(CMatrix::from_row_major(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(CMatrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn diagonal_top_singular() {
        let a = CMatrix::from_row_major(2, 2, vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let top = a.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((top.sigma - 3.0).abs() < 1e-10);
        assert!((top.right[0].norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn all_ones_top_singular() {
        let a = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let top = a.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((top.sigma - 2.0).abs() < 1e-12);
        let n = CMatrix::from_fn(4, 4, |_, _| c(1.0, 0.0));
        assert!((n.schur_singular_bound() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn gram_sides_agree() {
        let a = sample();
        let r = a.top_singular_via(GramSide::Rows, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let k = a.top_singular_via(GramSide::Cols, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((r.sigma - k.sigma).abs() < 1e-10 * k.sigma);
        for top in [r, k] {
            assert!((a.apply(&top.right).unwrap().norm() - top.sigma).abs() < 1e-9 * top.sigma);
        }
    }

    #[test]
    fn start_vector_in_kernel() {
        // all-ones lies in the kernel of this matrix
        let a = CMatrix::from_row_major(1, 2, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let top = a.top_singular_via(GramSide::Cols, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((top.sigma - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn zero_matrix_and_bad_tol_rejected() {
        assert!(CMatrix::zeros(2, 2).top_singular(1e-12, 10).is_err());
        assert!(sample().top_singular(0.0, 10).is_err());
    }

    #[test]
    fn non_convergence_reports_last_iterate() {
        let a = CMatrix::from_row_major(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.999, 0.0)]).unwrap();
        match a.top_singular(1e-15, 2) {
            Err(Error::NonConvergence { iterations: 2, last_sigma }) => assert!(last_sigma > 0.9),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn schur_identity() {
        assert!((CMatrix::identity(5).schur_singular_bound() - 1.0).abs() < 1e-15);
    }
}
