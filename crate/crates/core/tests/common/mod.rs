//! Reference computations that share no code with the library paths they check.
#![allow(dead_code)]

use std::f64::consts::PI;

use mubpp_core::{CMatrix, Complex64};

/// Eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi rotations
/// on the real symmetric embedding `[[Re H, -Im H], [Im H, Re H]]`.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.rows();
    assert_eq!(n, h.cols());
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // every eigenvalue of H appears twice in the embedding
    ev.into_iter().step_by(2).collect()
}

/// `sigma_1(A)^2` as the top eigenvalue of `A^dagger A`, Gram formed by hand.
pub fn sigma1_sq_oracle(a: &CMatrix) -> f64 {
    let (r, c) = (a.rows(), a.cols());
    let gram = CMatrix::from_fn(c, c, |i, j| (0..r).map(|k| a[(k, i)].conj() * a[(k, j)]).sum());
    hermitian_eigenvalues(&gram)[0]
}

/// Basis vectors for prime `p` by direct integer arithmetic mod p:
/// `B^(l)_{k,q} = w^{-kq + (l-1) q^2 / 2} / sqrt(p)`, `l >= 1`.
pub fn prime_mub_vector(p: usize, l: usize, k: usize) -> Vec<Complex64> {
    let inv2 = (p + 1) / 2;
    (0..p)
        .map(|q| {
            let e = ((p - (k * q) % p) + ((l - 1) * q % p) * q % p * inv2) % p;
            Complex64::from_polar(1.0 / (p as f64).sqrt(), 2.0 * PI * e as f64 / p as f64)
        })
        .collect()
}

/// Hand-rolled GF(9) = Z_3[t]/(t^2 + 1); elements are `(a, b)` = `a + b t`.
pub mod gf9 {
    pub type El = (u32, u32);

    pub fn from_index(i: usize) -> El {
        ((i % 3) as u32, (i / 3) as u32)
    }

    pub fn add(x: El, y: El) -> El {
        ((x.0 + y.0) % 3, (x.1 + y.1) % 3)
    }

    pub fn mul(x: El, y: El) -> El {
        // (a + bt)(c + dt) = ac - bd + (ad + bc) t
        ((x.0 * y.0 + 2 * x.1 * y.1) % 3, (x.0 * y.1 + x.1 * y.0) % 3)
    }

    pub fn trace(x: El) -> u32 {
        let cube = mul(x, mul(x, x));
        let s = add(x, cube);
        assert_eq!(s.1, 0, "trace must lie in Z_3");
        s.0
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub const ODD_PRIMES: [usize; 5] = [3, 5, 7, 11, 13];
