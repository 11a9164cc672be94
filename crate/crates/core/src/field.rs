//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored as little-endian coefficient vectors of polynomials
//! over Z_p reduced modulo a fixed irreducible monic polynomial. Every element
//! is identified with the index `sum_i c_i p^i`, which is how row and column
//! indices of the basis matrices map onto field elements.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard-coded irreducible moduli, little-endian and monic.
const MODULI: &[(u32, u32, &[u32])] = &[
    (3, 2, &[1, 0, 1]),    // t^2 + 1
    (3, 3, &[1, 2, 0, 1]), // t^3 + 2t + 1
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 0, 1]),    // t^2 + 2
    (5, 3, &[3, 3, 0, 1]), // t^3 + 3t + 3
    (7, 2, &[1, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
];

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` into `(p, m)` with `n = p^m`, or `None` if `n` is not a prime power.
pub fn prime_power(n: usize) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let n = n as u64;
    let p = (2..).take_while(|d| d * d <= n).find(|d| n.is_multiple_of(*d)).unwrap_or(n);
    let mut rest = n;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Characteristic, degree and reduction polynomial of a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    order: usize,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// GF(p^m) with the built-in modulus for that order.
    ///
    /// Characteristic 2 is only accepted as the prime field GF(2).
    pub fn new(p: u32, m: u32) -> Result<Arc<Self>> {
        let order = checked_order(p, m)?;
        if m == 1 {
            return Ok(Arc::new(Self { p, m, order, modulus: vec![0, 1] }));
        }
        let modulus = MODULI
            .iter()
            .find(|(mp, mm, _)| *mp == p && *mm == m)
            .map(|(_, _, poly)| poly.to_vec())
            .ok_or_else(|| {
                Error::UnsupportedDimension(order, format!("no irreducible modulus tabulated for GF({p}^{m})"))
            })?;
        Self::with_modulus(p, m, modulus)
    }

    /// GF(p^m) reduced by a caller-supplied monic polynomial (little-endian).
    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        let order = checked_order(p, m)?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::Usage(format!("modulus must be monic of degree {m}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Usage(format!("modulus coefficients must lie in [0, {p})")));
        }
        if m > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::Usage(format!("modulus {modulus:?} is reducible over Z_{p}")));
        }
        Ok(Arc::new(Self { p, m, order, modulus }))
    }

    /// The field of order `n`, if `n` is a supported prime power.
    pub fn for_order(n: usize) -> Result<Arc<Self>> {
        let (p, m) = prime_power(n)
            .ok_or_else(|| Error::UnsupportedDimension(n, "not a prime power".into()))?;
        Self::new(p, m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order N = p^m.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

fn checked_order(p: u32, m: u32) -> Result<usize> {
    if !is_prime(u64::from(p)) {
        return Err(Error::UnsupportedDimension(p as usize, format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Usage("extension degree must be positive".into()));
    }
    let order = (p as usize)
        .checked_pow(m)
        .ok_or_else(|| Error::Usage(format!("GF({p}^{m}) is too large")))?;
    if p == 2 && m > 1 {
        return Err(Error::UnsupportedDimension(order, "characteristic-2 extension fields are not supported".into()));
    }
    Ok(order)
}

/// Exhaustive check: no monic factor of degree 1..=deg/2 divides `poly`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut factor = digits(idx, p, d);
            factor.push(1);
            let (_, rem) = poly_divrem(poly, &factor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: usize, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % p as usize) as u32);
        idx /= p as usize;
    }
    out
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

fn degree(v: &[u32]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut base = u64::from(a) % p64;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

fn poly_divrem(num: &[u32], den: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let p64 = u64::from(p);
    let dd = degree(den).expect("division by zero polynomial");
    let lead_inv = u64::from(mod_inv(den[dd], p));
    let mut rem: Vec<u32> = num.to_vec();
    let mut quot = vec![0u32; num.len().max(1)];
    while let Some(rd) = degree(&rem) {
        if rd < dd {
            break;
        }
        let shift = rd - dd;
        let coef = u64::from(rem[rd]) * lead_inv % p64;
        quot[shift] = coef as u32;
        for (i, &dc) in den.iter().enumerate().take(dd + 1) {
            let sub = coef * u64::from(dc) % p64;
            rem[i + shift] = ((u64::from(rem[i + shift]) + p64 - sub) % p64) as u32;
        }
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p64 = u64::from(p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// An element of GF(p^m).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    coeffs: Vec<u32>,
    spec: Arc<FieldSpec>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{:?}]", self.spec.order, self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.m == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElement {
    /// Builds an element from coefficients, reducing each modulo p.
    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() > spec.m as usize {
            return Err(Error::Usage(format!(
                "expected at most {} coefficients, got {}",
                spec.m,
                coeffs.len()
            )));
        }
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % spec.p).collect();
        c.resize(spec.m as usize, 0);
        Ok(Self { coeffs: c, spec: Arc::clone(spec) })
    }

    /// The element whose base-p digits are the coefficients.
    pub fn from_index(spec: &Arc<FieldSpec>, index: usize) -> Result<Self> {
        if index >= spec.order {
            return Err(Error::IndexOutOfRange { index, limit: spec.order });
        }
        Ok(Self { coeffs: digits(index, spec.p, spec.m as usize), spec: Arc::clone(spec) })
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self { coeffs: vec![0; spec.m as usize], spec: Arc::clone(spec) }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        let mut coeffs = vec![0; spec.m as usize];
        coeffs[0] = 1;
        Self { coeffs, spec: Arc::clone(spec) }
    }

    /// All field elements in index order.
    pub fn all(spec: &Arc<FieldSpec>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..spec.order).map(move |i| Self { coeffs: digits(i, spec.p, spec.m as usize), spec: Arc::clone(spec) })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn index(&self) -> usize {
        self.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.spec.p as usize + c as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.spec.order, right: other.spec.order })
        }
    }

    fn with_coeffs(&self, coeffs: Vec<u32>) -> Self {
        Self { coeffs, spec: Arc::clone(&self.spec) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.spec.p;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.spec.p;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + p - b) % p).collect()))
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.p;
        self.with_coeffs(self.coeffs.iter().map(|&a| (p - a) % p).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.spec.p;
        let prod = poly_mul(&self.coeffs, &other.coeffs, p);
        let (_, rem) = poly_divrem(&prod, &self.spec.modulus, p);
        self.with_poly(rem)
    }

    fn with_poly(&self, mut poly: Vec<u32>) -> Self {
        poly.resize(self.spec.m as usize, 0);
        self.with_coeffs(poly)
    }

    /// Multiplicative inverse: Fermat for prime fields, extended Euclid otherwise.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.spec.order));
        }
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Ok(self.with_coeffs(vec![mod_inv(self.coeffs[0], p)]));
        }
        // Invariant: s_i * self = r_i (mod modulus).
        let mut r0 = self.spec.modulus.clone();
        let mut r1 = trim(self.coeffs.clone());
        let mut s0 = vec![0u32];
        let mut s1 = vec![1u32];
        while degree(&r1).is_some() {
            let (q, r) = poly_divrem(&r0, &r1, p);
            let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let scale = mod_inv(r0[0], p);
        let s: Vec<u32> = s0.iter().map(|&c| (u64::from(c) * u64::from(scale) % u64::from(p)) as u32).collect();
        let (_, s) = poly_divrem(&s, &self.spec.modulus, p);
        Ok(self.with_poly(s))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `a + a^p + ... + a^(p^(m-1))`, an element of Z_p.
    pub fn trace(&self) -> u32 {
        let p = u64::from(self.spec.p);
        let mut term = self.clone();
        let mut sum = self.clone();
        for _ in 1..self.spec.m {
            term = term.pow(p);
            sum = sum.add(&term).expect("same field");
        }
        debug_assert!(sum.coeffs[1..].iter().all(|&c| c == 0), "trace left the prime field");
        sum.coeffs[0]
    }

    /// Exponent of the additive character `a -> w^exponent(a)`, with
    /// `w = exp(2 pi i / p)`.
    ///
    /// For prime fields this is the element itself; for extensions it is the
    /// absolute trace.
    pub fn char_exponent(&self) -> u32 {
        if self.spec.m == 1 {
            self.coeffs[0]
        } else {
            self.trace()
        }
    }
}
