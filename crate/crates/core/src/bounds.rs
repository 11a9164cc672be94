//! Exact maximal non-detection probabilities and the analytic upper bounds
//! they are compared against.
//!
//! With control bases `m` chosen with equal frequency, the average
//! non-detection probability of an attack `a` on input `alpha` is
//! `|V a|^2 / (M + 1)`, where row `m` of `V` is `<b_alpha^(m)|`. The best
//! attack is therefore the top right singular vector of `V`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{prime_power, FieldElement, FieldSpec};
use crate::matrix::{CMatrix, CVector, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::mub::MubSet;
use crate::protocol::{AttackVector, ControlConfig};

/// Slack used when comparing exact values against analytic bounds.
pub const BOUND_SLACK: f64 = 1e-9;

/// Rows are the conjugated `alpha`-th vectors of the selected bases.
#[derive(Debug, Clone, PartialEq)]
pub struct VMatrix {
    pub alpha: usize,
    pub subset: Vec<usize>,
    pub rows: CMatrix,
}

impl VMatrix {
    /// Number of control bases, `M + 1`.
    pub fn bases(&self) -> usize {
        self.rows.rows()
    }

    pub fn dim(&self) -> usize {
        self.rows.cols()
    }

    /// `W = V V^dagger`, entries `<v_i|v_j>`.
    pub fn gram(&self) -> CMatrix {
        self.rows.gram_rows()
    }

    /// `V^dagger V`, the N x N form.
    pub fn gram_cols(&self) -> CMatrix {
        self.rows.gram_cols()
    }

    /// `sigma_1(V)^2`, computed on the smaller Gram matrix.
    pub fn sigma1_sq(&self) -> Result<f64> {
        let top = self.rows.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        Ok(top.sigma * top.sigma)
    }

    /// Largest deviation of an off-diagonal `|W_ij|` from `1/sqrt(N)`.
    pub fn gram_offdiag_deviation(&self) -> f64 {
        let w = self.gram();
        let target = 1.0 / (self.dim() as f64).sqrt();
        let mut dev = 0.0f64;
        for i in 0..w.rows() {
            for j in 0..w.cols() {
                if i != j {
                    dev = dev.max((w[(i, j)].norm() - target).abs());
                }
            }
        }
        dev
    }
}

/// Stacks `<b_alpha^(m)|` for each `m` in `subset`, in order.
pub fn build_v_matrix(alpha: usize, set: &MubSet, subset: &[usize]) -> Result<VMatrix> {
    if subset.is_empty() {
        return Err(Error::Usage("basis subset must be non-empty".into()));
    }
    if alpha >= set.dim() {
        return Err(Error::IndexOutOfRange { index: alpha, limit: set.dim() });
    }
    let rows = subset
        .iter()
        .map(|&m| Ok(set.basis(m)?.vector(alpha).conj()))
        .collect::<Result<Vec<CVector>>>()?;
    Ok(VMatrix { alpha, subset: subset.to_vec(), rows: CMatrix::from_rows(&rows)? })
}

/// Eve's best attack under uniform basis selection: returns
/// `(sigma_1(V)^2 / (M + 1), top right singular vector)`.
pub fn exact_max_nondetection(v: &VMatrix) -> Result<(f64, AttackVector)> {
    let top = v.rows.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let d = top.sigma * top.sigma / v.bases() as f64;
    Ok((d, AttackVector::normalized(v.alpha, top.right)?))
}

/// Best attack for arbitrary weights: top right singular vector of
/// `diag(sqrt q) V`. Returns the attained `d_alpha` and the attack.
pub fn optimal_attack(alpha: usize, set: &MubSet, cfg: &ControlConfig) -> Result<(f64, AttackVector)> {
    let v = build_v_matrix(alpha, set, cfg.basis_indices())?;
    let scaled = CMatrix::from_fn(v.bases(), v.dim(), |i, j| v.rows[(i, j)] * cfg.weights()[i].sqrt());
    let top = scaled.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    Ok((top.sigma * top.sigma, AttackVector::normalized(alpha, top.right)?))
}

/// `sigma_1(V)^2 / (M + 1)`.
pub fn bound_thm1(v: &VMatrix) -> Result<f64> {
    Ok(v.sigma1_sq()? / v.bases() as f64)
}

/// Bound for `M + 1` mutually unbiased bases in dimension `n`: `(1 + M/sqrt N) / (1 + M)`.
pub fn bound_thm2(n: usize, m: usize) -> f64 {
    (1.0 + m as f64 / (n as f64).sqrt()) / (1.0 + m as f64)
}

/// [`bound_thm2`] with all `N + 1` bases: `(1 + sqrt N) / (1 + N)`.
pub fn bound_full_set(n: usize) -> f64 {
    bound_thm2(n, n)
}

fn require_odd_prime_power(n: usize) -> Result<()> {
    match prime_power(n) {
        Some((p, _)) if p % 2 == 1 => Ok(()),
        _ => Err(Error::UnsupportedDimension(n, "bound requires an odd prime power".into())),
    }
}

/// `3 / (1 + N)` for odd prime powers with the full set.
pub fn bound_thm3(n: usize) -> Result<f64> {
    require_odd_prime_power(n)?;
    Ok(3.0 / (1.0 + n as f64))
}

/// `2 / N` for odd prime powers with the computational basis left out.
pub fn bound_corollary(n: usize) -> Result<f64> {
    require_odd_prime_power(n)?;
    Ok(2.0 / n as f64)
}

/// Reference curve for a computational/dual pair: `(1 + 1/sqrt N) / 2`.
pub fn bound_two_basis(n: usize) -> f64 {
    (1.0 + 1.0 / (n as f64).sqrt()) / 2.0
}

/// Numerical check of the `V^dagger V = P + Q` split for the full set.
#[derive(Debug, Clone, Serialize)]
pub struct PqReport {
    pub n: usize,
    pub alpha: usize,
    /// `max |P - e_alpha e_alpha^dagger|`.
    pub p_deviation: f64,
    /// `max |(V^dagger V - P) - Q|` with `Q` summed over bases 1..=N.
    pub split_deviation: f64,
    /// `max | |Q_{mu,nu}| - [ (mu - nu)(mu + nu) = 0 ] |`.
    pub modulus_deviation: f64,
    /// `max |Q_{mu,nu} - w^{chi(-alpha (mu - nu))}|` over the support.
    pub phase_deviation: f64,
    /// Number of `(mu, nu)` with `(mu - nu)(mu + nu) = 0` in GF(N).
    pub support: usize,
    pub sigma1_q: f64,
    pub schur_q: f64,
    pub sigma1_w: f64,
    pub passed: bool,
}

const PQ_TOL: f64 = 1e-10;

/// Builds the report without judging it; see [`verify_pq_structure`].
pub fn pq_structure_report(set: &MubSet, alpha: usize) -> Result<PqReport> {
    let n = set.dim();
    require_odd_prime_power(n)?;
    if set.len() != n + 1 {
        return Err(Error::Usage(format!("P + Q split needs all {} bases, got {}", n + 1, set.len())));
    }
    let spec = FieldSpec::for_order(n)?;
    let p_root = f64::from(spec.p());
    let elems: Vec<FieldElement> = FieldElement::all(&spec).collect();
    let alpha_el = elems.get(alpha).ok_or(Error::IndexOutOfRange { index: alpha, limit: n })?;

    let all: Vec<usize> = (0..=n).collect();
    let v = build_v_matrix(alpha, set, &all)?;
    let w = v.gram_cols();

    // W_{mu,nu} = sum_q B^(q)_{alpha,mu} conj(B^(q)_{alpha,nu})
    let outer = |q: usize| -> Result<CMatrix> {
        let b = set.basis(q)?;
        Ok(CMatrix::from_fn(n, n, |mu, nu| b.coeff(alpha, mu) * b.coeff(alpha, nu).conj()))
    };
    let p_mat = outer(0)?;
    let mut q_mat = CMatrix::zeros(n, n);
    for q in 1..=n {
        q_mat = q_mat.add(&outer(q)?)?;
    }
    let target_p = CMatrix::from_fn(n, n, |mu, nu| {
        Complex64::new(if mu == alpha && nu == alpha { 1.0 } else { 0.0 }, 0.0)
    });
    let p_deviation = p_mat.max_abs_diff(&target_p);
    let split_deviation = w.max_abs_diff(&p_mat.add(&q_mat)?);

    let mut modulus_deviation = 0.0f64;
    let mut phase_deviation = 0.0f64;
    let mut support = 0;
    let neg_alpha = alpha_el.neg();
    for (mu, emu) in elems.iter().enumerate() {
        for (nu, enu) in elems.iter().enumerate() {
            let diff = emu.sub(enu)?;
            let on_support = diff.mul(&emu.add(enu)?)?.is_zero();
            let z = q_mat[(mu, nu)];
            let expected_modulus = if on_support { 1.0 } else { 0.0 };
            modulus_deviation = modulus_deviation.max((z.norm() - expected_modulus).abs());
            if on_support {
                support += 1;
                let k = neg_alpha.mul(&diff)?.char_exponent();
                let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / p_root);
                phase_deviation = phase_deviation.max((z - phase).norm());
            }
        }
    }
    let sigma1_q = q_mat.top_singular(DEFAULT_TOL, DEFAULT_MAX_ITER)?.sigma;
    let schur_q = q_mat.schur_singular_bound();
    let sigma1_w = v.sigma1_sq()?;
    let passed = p_deviation <= PQ_TOL
        && split_deviation <= PQ_TOL
        && modulus_deviation <= PQ_TOL
        && phase_deviation <= PQ_TOL
        && sigma1_q <= 2.0 + BOUND_SLACK
        && sigma1_w <= 3.0 + BOUND_SLACK;
    Ok(PqReport {
        n,
        alpha,
        p_deviation,
        split_deviation,
        modulus_deviation,
        phase_deviation,
        support,
        sigma1_q,
        schur_q,
        sigma1_w,
        passed,
    })
}

/// Checks `P = e_alpha e_alpha^dagger`, `|Q_{mu,nu}| = [(mu-nu)(mu+nu) = 0]`
/// and `sigma_1(Q) <= 2`; any violation becomes [`Error::Structure`].
pub fn verify_pq_structure(set: &MubSet, alpha: usize) -> Result<PqReport> {
    let report = pq_structure_report(set, alpha)?;
    if report.passed {
        Ok(report)
    } else {
        Err(Error::Structure(format!("{report:?}")))
    }
}

/// Which control bases a report covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisSubset {
    All,
    NoComputational,
    Explicit(Vec<usize>),
}

impl BasisSubset {
    pub fn indices(&self, set: &MubSet) -> Result<Vec<usize>> {
        let out: Vec<usize> = match self {
            BasisSubset::All => (0..set.len()).collect(),
            BasisSubset::NoComputational => (1..set.len()).collect(),
            BasisSubset::Explicit(v) => v.clone(),
        };
        if out.is_empty() {
            return Err(Error::Usage("basis subset is empty".into()));
        }
        if let Some(&bad) = out.iter().find(|&&m| m >= set.len()) {
            return Err(Error::IndexOutOfRange { index: bad, limit: set.len() });
        }
        let mut sorted = out.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != out.len() {
            return Err(Error::Usage("basis subset has repeated indices".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for BasisSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSubset::All => write!(f, "all"),
            BasisSubset::NoComputational => write!(f, "no-computational"),
            BasisSubset::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

impl FromStr for BasisSubset {
    type Err = Error;

    /// `all`, `no-computational`, or indices separated by `,` or `;`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(BasisSubset::All),
            "no-computational" => Ok(BasisSubset::NoComputational),
            other => other
                .split([',', ';'])
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Usage(format!("bad basis index {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(BasisSubset::Explicit),
        }
    }
}

/// Exact optimum and every applicable bound for one dimension and subset.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub subset: String,
    pub bases_used: Vec<usize>,
    /// Largest `d_alpha` over inputs `alpha`.
    pub d_exact: f64,
    /// Smallest `d_alpha` over inputs `alpha`.
    pub d_exact_min: f64,
    pub alpha_spread: f64,
    /// Per-input `sigma_1(V^(alpha))^2`.
    pub sigma1_sq_per_alpha: Vec<f64>,
    pub bound_thm1: f64,
    /// Generic bound for `M + 1` mutually unbiased bases.
    pub bound_thm2: f64,
    /// Full-set specialization; only for the complete set.
    pub bound_eq13: Option<f64>,
    /// Odd prime powers with the complete set.
    pub bound_thm3: Option<f64>,
    /// Odd prime powers with exactly the non-computational bases.
    pub bound_corollary: Option<f64>,
    pub bound_two_basis: f64,
    /// `max_alpha sigma_1(V^(alpha))^2`.
    pub sigma1_sq: f64,
    /// Schur test value of `W = V V^dagger` at the worst input.
    pub schur_w: f64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "n,bases,subset,d_exact,thm1,thm2,eq13,thm3,corollary,two_basis,sigma1_sq";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.12}"));
        format!(
            "{},{},{},{:.12},{:.12},{:.12},{},{},{},{:.12},{:.12}",
            self.n,
            self.bases_used.len(),
            self.subset,
            self.d_exact,
            self.bound_thm1,
            self.bound_thm2,
            opt(self.bound_eq13),
            opt(self.bound_thm3),
            opt(self.bound_corollary),
            self.bound_two_basis,
            self.sigma1_sq
        )
    }

    /// Violated orderings between the exact value and each applicable bound.
    pub fn ordering_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, bound: f64| {
            if self.d_exact > bound + BOUND_SLACK {
                out.push(format!("d_exact {:.12} exceeds {name} {:.12}", self.d_exact, bound));
            }
        };
        check("thm1", self.bound_thm1);
        check("thm2", self.bound_thm2);
        if let Some(b) = self.bound_eq13 {
            check("eq13", b);
        }
        if let Some(b) = self.bound_thm3 {
            check("thm3", b);
        }
        if let Some(b) = self.bound_corollary {
            check("corollary", b);
        }
        if (self.d_exact - self.bound_thm1).abs() > BOUND_SLACK {
            out.push(format!("d_exact {:.12} differs from thm1 {:.12}", self.d_exact, self.bound_thm1));
        }
        out
    }
}

/// Evaluates every input `alpha` and assembles the report.
pub fn build_report(n: usize, subset: &BasisSubset) -> Result<BoundReport> {
    let set = MubSet::for_dimension(n)?;
    build_report_for(&set, subset)
}

/// Same as [`build_report`] over an existing set.
pub fn build_report_for(set: &MubSet, subset: &BasisSubset) -> Result<BoundReport> {
    let n = set.dim();
    let bases_used = subset.indices(set)?;
    let count = bases_used.len();
    let mut sigma1_sq_per_alpha = Vec::with_capacity(n);
    let mut worst = 0;
    for alpha in 0..n {
        let v = build_v_matrix(alpha, set, &bases_used)?;
        let s = v.sigma1_sq()?;
        if s > sigma1_sq_per_alpha.get(worst).copied().unwrap_or(f64::NEG_INFINITY) {
            worst = alpha;
        }
        sigma1_sq_per_alpha.push(s);
    }
    let sigma1_sq = sigma1_sq_per_alpha[worst];
    let min_sq = sigma1_sq_per_alpha.iter().copied().fold(f64::INFINITY, f64::min);
    let d_exact = sigma1_sq / count as f64;
    let d_exact_min = min_sq / count as f64;

    let odd = prime_power(n).is_some_and(|(p, _)| p % 2 == 1);
    let full = count == set.len() && set.len() == n + 1;
    let mut sorted = bases_used.clone();
    sorted.sort_unstable();
    let no_computational = sorted == (1..=n).collect::<Vec<_>>() && set.len() == n + 1;

    let schur_w = build_v_matrix(worst, set, &bases_used)?.gram().schur_singular_bound();
    Ok(BoundReport {
        n,
        subset: subset.to_string(),
        bases_used,
        d_exact,
        d_exact_min,
        alpha_spread: d_exact - d_exact_min,
        sigma1_sq_per_alpha,
        bound_thm1: d_exact,
        bound_thm2: bound_thm2(n, count - 1),
        bound_eq13: full.then(|| bound_full_set(n)),
        bound_thm3: (full && odd).then(|| 3.0 / (1.0 + n as f64)),
        bound_corollary: (no_computational && odd).then(|| 2.0 / n as f64),
        bound_two_basis: bound_two_basis(n),
        sigma1_sq,
        schur_w,
    })
}
