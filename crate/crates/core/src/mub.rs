//! Complete sets of mutually unbiased bases in prime-power dimensions.
//!
//! Basis 0 is the computational basis. For odd characteristic, basis `l >= 1`
//! has vectors
//!
//! ```text
//! |b_k^(l)> = N^{-1/2} sum_q w^{chi(-k q)} w^{chi((l-1) q q / 2)} |q>
//! ```
//!
//! with arithmetic in GF(N), `chi` the character exponent of
//! [`FieldElement::char_exponent`] and `w = exp(2 pi i / p)`. Dimension 2 uses
//! the Pauli eigenbases.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{CMatrix, CVector};

/// An orthonormal basis of C^N; column `k` of `matrix` is the `k`-th vector in
/// computational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub label: usize,
    pub matrix: CMatrix,
}

impl Basis {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The `k`-th basis vector.
    pub fn vector(&self, k: usize) -> CVector {
        self.matrix.col(k)
    }

    /// Coefficient `B_{k,q}`: component `q` of vector `k`.
    pub fn coeff(&self, k: usize, q: usize) -> Complex64 {
        self.matrix[(q, k)]
    }

    /// Largest entry of `|B^dagger B - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.gram_cols().max_abs_diff(&CMatrix::identity(self.dim()))
    }
}

/// Entrywise complex conjugate of a basis. If Alice measures one half of
/// `sum_k |k>|k>` in `b` and finds `i`, Bob finds `i` in the conjugate basis.
pub fn conjugate_basis(b: &Basis) -> Basis {
    Basis { label: b.label, matrix: b.matrix.conj() }
}

/// An ordered family of bases of C^N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MubSetJson", try_from = "MubSetJson")]
pub struct MubSet {
    dim: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    /// Assembles a set from bases; shapes are checked, unbiasedness is not
    /// (see [`verify_mub`]).
    pub fn from_bases(dim: usize, bases: Vec<Basis>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::Usage("a basis set needs at least one basis".into()));
        }
        if let Some(b) = bases.iter().find(|b| b.matrix.rows() != dim || b.matrix.cols() != dim) {
            return Err(Error::Shape(format!(
                "basis {} is {}x{}, expected {dim}x{dim}",
                b.label,
                b.matrix.rows(),
                b.matrix.cols()
            )));
        }
        Ok(Self { dim, bases })
    }

    /// Full set for dimension `n`.
    pub fn for_dimension(n: usize) -> Result<Self> {
        build_mub_set(&FieldSpec::for_order(n)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, m: usize) -> Result<&Basis> {
        self.bases.get(m).ok_or(Error::IndexOutOfRange { index: m, limit: self.bases.len() })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Copy with basis `m` replaced; mainly for exercising [`verify_mub`].
    pub fn with_basis_replaced(&self, m: usize, matrix: CMatrix) -> Result<Self> {
        let mut bases = self.bases.clone();
        let slot = bases.get_mut(m).ok_or(Error::IndexOutOfRange { index: m, limit: self.bases.len() })?;
        slot.matrix = matrix;
        Self::from_bases(self.dim, bases)
    }
}

/// Wire format: `{dim, bases: [[[re, im], ...row-major], ...]}`.
#[derive(Serialize, Deserialize)]
struct MubSetJson {
    dim: usize,
    bases: Vec<Vec<[f64; 2]>>,
}

impl From<MubSet> for MubSetJson {
    fn from(set: MubSet) -> Self {
        Self {
            dim: set.dim,
            bases: set
                .bases
                .iter()
                .map(|b| b.matrix.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<MubSetJson> for MubSet {
    type Error = Error;

    fn try_from(raw: MubSetJson) -> Result<Self> {
        if raw.dim == 0 {
            return Err(Error::Usage("dim must be positive".into()));
        }
        let bases = raw
            .bases
            .into_iter()
            .enumerate()
            .map(|(label, entries)| {
                let data = entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                Ok(Basis { label, matrix: CMatrix::from_row_major(raw.dim, raw.dim, data)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bases(raw.dim, bases)
    }
}

/// Builds the complete set of `N + 1` mutually unbiased bases for GF(N).
pub fn build_mub_set(spec: &Arc<FieldSpec>) -> Result<MubSet> {
    let n = spec.order();
    if spec.p() == 2 {
        return if spec.m() == 1 {
            Ok(qubit_mubs())
        } else {
            Err(Error::UnsupportedDimension(n, "characteristic-2 extensions are not supported".into()))
        };
    }
    let p = spec.p();
    let elems: Vec<FieldElement> = FieldElement::all(spec).collect();
    let two = FieldElement::one(spec).add(&FieldElement::one(spec))?;
    let half = FieldElement::one(spec).div(&two)?;

    let roots: Vec<Complex64> = (0..p).map(|j| Complex64::from_polar(1.0, 2.0 * PI * f64::from(j) / f64::from(p))).collect();
    let norm = 1.0 / (n as f64).sqrt();

    // chi(-k q) for every (k, q)
    let mut shift = vec![0u32; n * n];
    for (k, ek) in elems.iter().enumerate() {
        let neg_k = ek.neg();
        for (q, eq) in elems.iter().enumerate() {
            shift[k * n + q] = neg_k.mul(eq)?.char_exponent();
        }
    }
    // q q / 2
    let half_squares: Vec<FieldElement> =
        elems.iter().map(|e| e.mul(e).and_then(|sq| sq.mul(&half))).collect::<Result<_>>()?;

    let mut bases = Vec::with_capacity(n + 1);
    bases.push(Basis { label: 0, matrix: CMatrix::identity(n) });
    for l in 1..=n {
        let slope = &elems[l - 1];
        let chirp: Vec<u32> =
            half_squares.iter().map(|hs| slope.mul(hs).map(|x| x.char_exponent())).collect::<Result<_>>()?;
        let matrix = CMatrix::from_fn(n, n, |q, k| roots[((shift[k * n + q] + chirp[q]) % p) as usize] * norm);
        bases.push(Basis { label: l, matrix });
    }
    MubSet::from_bases(n, bases)
}

fn qubit_mubs() -> MubSet {
    let r = FRAC_1_SQRT_2;
    let c = Complex64::new;
    // columns are basis vectors
    let computational = CMatrix::identity(2);
    let x = CMatrix::from_row_major(2, 2, vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]).unwrap();
    let y = CMatrix::from_row_major(2, 2, vec![c(r, 0.0), c(r, 0.0), c(0.0, r), c(0.0, -r)]).unwrap();
    let bases = [computational, x, y].into_iter().enumerate().map(|(label, matrix)| Basis { label, matrix }).collect();
    MubSet { dim: 2, bases }
}

/// Outcome of checking `|<b_k^(m)|b_l^(n)>|^2 = delta_mn delta_kl + (1 - delta_mn)/N`.
#[derive(Debug, Clone, Serialize)]
pub struct MubVerification {
    pub dim: usize,
    pub bases: usize,
    pub max_deviation: f64,
    /// `(m, k, n, l)` where the deviation peaks.
    pub worst: (usize, usize, usize, usize),
    pub tol: f64,
    pub passed: bool,
}

/// Largest deviation of any squared overlap from its mutually-unbiased target.
pub fn verify_mub(set: &MubSet, tol: f64) -> MubVerification {
    let n = set.dim();
    let unbiased = 1.0 / n as f64;
    let mut max_dev = 0.0f64;
    let mut worst = (0, 0, 0, 0);
    for (mi, bm) in set.bases().iter().enumerate() {
        let adj = bm.matrix.dagger();
        for (ni, bn) in set.bases().iter().enumerate().skip(mi) {
            let overlaps = adj.matmul(&bn.matrix).expect("square bases of equal size");
            for k in 0..n {
                for l in 0..n {
                    let target = match (mi == ni, k == l) {
                        (true, true) => 1.0,
                        (true, false) => 0.0,
                        (false, _) => unbiased,
                    };
                    let dev = (overlaps[(k, l)].norm_sqr() - target).abs();
                    // NaN entries count as failures
                    if dev > max_dev || dev.is_nan() {
                        max_dev = if dev.is_nan() { f64::INFINITY } else { dev };
                        worst = (mi, k, ni, l);
                    }
                }
            }
        }
    }
    MubVerification { dim: n, bases: set.len(), max_deviation: max_dev, worst, tol, passed: max_dev <= tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_three_fourier_column() {
        let set = MubSet::for_dimension(3).unwrap();
        assert_eq!(set.len(), 4);
        let v = set.basis(1).unwrap().vector(0);
        for z in v.iter() {
            assert!((z - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn basis_zero_is_identity() {
        for n in [2, 3, 9] {
            let set = MubSet::for_dimension(n).unwrap();
            assert_eq!(set.basis(0).unwrap().matrix, CMatrix::identity(n));
        }
    }

    #[test]
    fn unsupported_dimensions() {
        for n in [4, 6, 8, 10, 12] {
            assert!(matches!(MubSet::for_dimension(n), Err(Error::UnsupportedDimension(..))), "N={n}");
        }
    }

    #[test]
    fn duplicated_identity_fails_verification() {
        let set = MubSet::for_dimension(5).unwrap();
        let broken = set.with_basis_replaced(3, CMatrix::identity(5)).unwrap();
        let report = verify_mub(&broken, 1e-10);
        assert!(!report.passed);
        assert!((report.max_deviation - (1.0 - 1.0 / 5.0)).abs() < 1e-12);
    }

    #[test]
    fn conjugation_is_involutive() {
        let set = MubSet::for_dimension(7).unwrap();
        for b in set.bases() {
            assert_eq!(&conjugate_basis(&conjugate_basis(b)), b);
        }
        assert_eq!(conjugate_basis(set.basis(0).unwrap()).matrix, CMatrix::identity(7));
    }

    #[test]
    fn deterministic_construction() {
        let a = MubSet::for_dimension(11).unwrap();
        let b = MubSet::for_dimension(11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(MubSet::from_json(r#"{"dim": 2, "bases": [[[1,0],[0,0],[0,0]]]}"#).is_err());
        assert!(MubSet::from_json(r#"{"dim": 0, "bases": []}"#).is_err());
        assert!(MubSet::from_json("not json").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let set = MubSet::for_dimension(3).unwrap();
        let back = MubSet::from_json(&set.to_json().unwrap()).unwrap();
        assert_eq!(back, set);
    }
}
