//! The qudit ping-pong protocol: entangled pair preparation, dense-coding
//! operators, Bell-basis decoding, Eve's ancilla attack and control-mode
//! detection statistics.
//!
//! Two-qudit states are stored over `|home> (x) |travel>` with flat index
//! `home * N + travel`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds;
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::mub::{conjugate_basis, MubSet};

/// Overlap a decoded Bell state must reach to count as unambiguous.
pub const DECODE_THRESHOLD: f64 = 1.0 - 1e-9;

const NORM_TOL: f64 = 1e-12;

fn root_of_unity(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64)
}

/// A pure state of the home and travel qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct EprState {
    dim: usize,
    amplitudes: CVector,
}

/// `N^{-1/2} sum_k |k>|k>`.
pub fn prepare_epr(n: usize) -> Result<EprState> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "a qudit needs dimension at least 2".into()));
    }
    let mut amps = CVector::zeros(n * n);
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        amps[k * n + k] = a;
    }
    Ok(EprState { dim: n, amplitudes: amps })
}

/// Generalized Bell state `(I (x) U_{mu,nu}) |psi_00>`.
pub fn bell_state(n: usize, op: EncodingOp) -> Result<EprState> {
    prepare_epr(n)?.encode(op)
}

impl EprState {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, home: usize, travel: usize) -> Complex64 {
        self.amplitudes[home * self.dim + travel]
    }

    /// Density matrix of the travel qudit after tracing out home.
    pub fn reduced_travel(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, n, |t, s| (0..n).map(|h| self.amplitude(h, t) * self.amplitude(h, s).conj()).sum())
    }

    /// Applies Alice's `U_{mu,nu}` to the travel qudit.
    pub fn encode(&self, op: EncodingOp) -> Result<EprState> {
        let n = self.dim;
        op.check(n)?;
        let mut out = CVector::zeros(n * n);
        for h in 0..n {
            for t in 0..n {
                out[h * n + (t + op.nu) % n] += root_of_unity(n, op.mu * t) * self.amplitude(h, t);
            }
        }
        Ok(EprState { dim: n, amplitudes: out })
    }

    /// Forward-path attack with Eve's probe states identified: conditioned on
    /// home `|k>`, the travel qudit `|k>` becomes `sum_l a_{k,l} |l>`.
    pub fn attacked(&self, attack: &[AttackVector]) -> Result<EprState> {
        let n = self.dim;
        if attack.len() != n {
            return Err(Error::Usage(format!("need {n} attack vectors, got {}", attack.len())));
        }
        let mut out = CVector::zeros(n * n);
        for h in 0..n {
            for (t, a) in attack.iter().enumerate() {
                let amp = self.amplitude(h, t);
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                for l in 0..n {
                    out[h * n + l] += amp * a.amps[l];
                }
            }
        }
        let amplitudes = out.normalized()?;
        Ok(EprState { dim: n, amplitudes })
    }

    /// Squared overlaps with every Bell state, indexed `mu * N + nu`.
    pub fn bell_overlaps(&self) -> Vec<f64> {
        let n = self.dim;
        let norm = 1.0 / (n as f64).sqrt();
        let mut out = Vec::with_capacity(n * n);
        for mu in 0..n {
            for nu in 0..n {
                // <psi_{mu,nu}| = N^{-1/2} sum_k w^{-mu k} <k, k+nu|
                let s: Complex64 = (0..n)
                    .map(|k| root_of_unity(n, mu * k).conj() * self.amplitude(k, (k + nu) % n))
                    .sum();
                out.push((s * norm).norm_sqr());
            }
        }
        out
    }

    /// Bob's Bell measurement, deterministic when exactly one outcome has
    /// overlap above [`DECODE_THRESHOLD`].
    pub fn decode(&self) -> Result<EncodingOp> {
        let overlaps = self.bell_overlaps();
        let (best_idx, best) = overlaps
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        if best < DECODE_THRESHOLD {
            return Err(Error::Ambiguous { best, overlaps });
        }
        Ok(EncodingOp { mu: best_idx / self.dim, nu: best_idx % self.dim })
    }
}

/// Alice's dense-coding operation `U_{mu,nu} = sum_k w^{mu k} |k+nu><k|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodingOp {
    pub mu: usize,
    pub nu: usize,
}

impl EncodingOp {
    pub fn new(mu: usize, nu: usize) -> Self {
        Self { mu, nu }
    }

    fn check(&self, n: usize) -> Result<()> {
        let bad = if self.mu >= n { Some(self.mu) } else if self.nu >= n { Some(self.nu) } else { None };
        match bad {
            Some(index) => Err(Error::IndexOutOfRange { index, limit: n }),
            None => Ok(()),
        }
    }

    pub fn matrix(&self, n: usize) -> Result<CMatrix> {
        self.check(n)?;
        let mut u = CMatrix::zeros(n, n);
        for k in 0..n {
            u[((k + self.nu) % n, k)] = root_of_unity(n, self.mu * k);
        }
        Ok(u)
    }
}

/// Encodes `op` on an undisturbed pair and decodes it again.
pub fn encode_decode_roundtrip(state: &EprState, op: EncodingOp) -> Result<EncodingOp> {
    state.encode(op)?.decode()
}

/// Probability that Bob, measuring home in the conjugate of basis `l`, finds
/// `k` given that Alice found `k` on the travel qudit in basis `l`.
pub fn conjugate_correlation(state: &EprState, set: &MubSet, l: usize, k: usize) -> Result<f64> {
    Ok(conditional_outcomes(state, set, l, k)?[k])
}

/// Bob's outcome distribution in the conjugate basis, conditioned on Alice
/// obtaining `k` in basis `l`.
fn conditional_outcomes(state: &EprState, set: &MubSet, l: usize, k: usize) -> Result<Vec<f64>> {
    let n = state.dim();
    if set.dim() != n {
        return Err(Error::Shape(format!("state of dimension {n} with bases of dimension {}", set.dim())));
    }
    let basis = set.basis(l)?;
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, limit: n });
    }
    let alice = basis.vector(k);
    // home-side conditional state: sum_t <b_k|t> psi[h, t]
    let home = CVector::new(
        (0..n).map(|h| (0..n).map(|t| alice[t].conj() * state.amplitude(h, t)).sum()).collect(),
    );
    let home = home.normalized()?;
    let bob = conjugate_basis(basis);
    (0..n).map(|j| Ok(bob.vector(j).inner(&home)?.norm_sqr())).collect()
}

/// Eve's attack amplitudes `a_{alpha,l}` for input state `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackVector {
    pub alpha: usize,
    pub amps: CVector,
}

impl AttackVector {
    /// Requires unit norm to 1e-12.
    pub fn new(alpha: usize, amps: CVector) -> Result<Self> {
        if alpha >= amps.dim() {
            return Err(Error::IndexOutOfRange { index: alpha, limit: amps.dim() });
        }
        if (amps.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::Usage(format!("attack vector must have unit norm, got {}", amps.norm())));
        }
        Ok(Self { alpha, amps })
    }

    /// Normalizes `amps` first.
    pub fn normalized(alpha: usize, amps: CVector) -> Result<Self> {
        Self::new(alpha, amps.normalized()?)
    }

    /// `a = e_alpha`: Eve leaves the amplitude on `|alpha>` and only tags it.
    pub fn identity(n: usize, alpha: usize) -> Result<Self> {
        if alpha >= n {
            return Err(Error::IndexOutOfRange { index: alpha, limit: n });
        }
        Ok(Self { alpha, amps: CVector::basis(n, alpha) })
    }

    pub fn dim(&self) -> usize {
        self.amps.dim()
    }
}

/// Control bases and their selection frequencies `q_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlConfig {
    basis_indices: Vec<usize>,
    weights: Vec<f64>,
}

impl ControlConfig {
    pub fn new(basis_indices: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if basis_indices.is_empty() {
            return Err(Error::Usage("control mode needs at least one basis".into()));
        }
        if basis_indices.len() != weights.len() {
            return Err(Error::Usage(format!(
                "{} bases but {} weights",
                basis_indices.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Usage("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Usage(format!("weights must sum to 1, got {total}")));
        }
        let mut seen = basis_indices.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != basis_indices.len() {
            return Err(Error::Usage("basis indices must be distinct".into()));
        }
        Ok(Self { basis_indices, weights })
    }

    /// Equal weights over `basis_indices`.
    pub fn uniform(basis_indices: Vec<usize>) -> Result<Self> {
        let w = 1.0 / basis_indices.len().max(1) as f64;
        let weights = vec![w; basis_indices.len()];
        Self::new(basis_indices, weights)
    }

    /// Equal weights over every basis of `set`.
    pub fn all(set: &MubSet) -> Self {
        Self::uniform((0..set.len()).collect()).expect("non-empty set")
    }

    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        let w = 1.0 / self.weights.len() as f64;
        self.weights.iter().all(|x| (x - w).abs() < 1e-12)
    }

    fn validate_for(&self, set: &MubSet) -> Result<()> {
        match self.basis_indices.iter().find(|&&m| m >= set.len()) {
            Some(&index) => Err(Error::IndexOutOfRange { index, limit: set.len() }),
            None => Ok(()),
        }
    }
}

fn check_attack(alpha: usize, a: &AttackVector, set: &MubSet) -> Result<()> {
    if a.alpha != alpha {
        return Err(Error::Usage(format!("attack vector is for input {} not {alpha}", a.alpha)));
    }
    if a.dim() != set.dim() {
        return Err(Error::Shape(format!("attack of dimension {} against bases of dimension {}", a.dim(), set.dim())));
    }
    Ok(())
}

/// Coordinates `c_{alpha,k} = sum_l a_{alpha,l} <b_k^(m)|l>` of the attacked
/// travel state in basis `m`.
pub fn attack_transform(alpha: usize, a: &AttackVector, m: usize, set: &MubSet) -> Result<CVector> {
    check_attack(alpha, a, set)?;
    set.basis(m)?.matrix.dagger().apply(&a.amps)
}

/// Probability `|<b_alpha^(m)|a>|^2` that the attack survives a check in basis `m`.
pub fn nondetection_prob(alpha: usize, a: &AttackVector, m: usize, set: &MubSet) -> Result<f64> {
    check_attack(alpha, a, set)?;
    Ok(set.basis(m)?.vector(alpha).inner(&a.amps)?.norm_sqr())
}

/// `d_alpha = sum_m q_m p_alpha^(m)`.
pub fn average_nondetection(alpha: usize, a: &AttackVector, cfg: &ControlConfig, set: &MubSet) -> Result<f64> {
    cfg.validate_for(set)?;
    cfg.basis_indices
        .iter()
        .zip(&cfg.weights)
        .map(|(&m, &q)| Ok(q * nondetection_prob(alpha, a, m, set)?))
        .sum()
}

/// Eve's strategy for a whole session: one vector per input state, or none.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackPolicy {
    None,
    PerInput(Vec<AttackVector>),
}

impl AttackPolicy {
    /// The strongest attack against `cfg`: for each input, the top right
    /// singular vector of `diag(sqrt q) V^(alpha)`.
    pub fn optimal(set: &MubSet, cfg: &ControlConfig) -> Result<Self> {
        (0..set.dim())
            .map(|alpha| bounds::optimal_attack(alpha, set, cfg).map(|(_, a)| a))
            .collect::<Result<Vec<_>>>()
            .map(AttackPolicy::PerInput)
    }

    /// Same amplitudes (normalized) for every input.
    pub fn uniform(n: usize, amps: CVector) -> Result<Self> {
        if amps.dim() != n {
            return Err(Error::Shape(format!("attack of dimension {} for N = {n}", amps.dim())));
        }
        let amps = amps.normalized()?;
        (0..n)
            .map(|alpha| AttackVector::new(alpha, amps.clone()))
            .collect::<Result<Vec<_>>>()
            .map(AttackPolicy::PerInput)
    }

    /// Analytic non-detection probability of one control round, averaged over
    /// the uniformly drawn input state (or for `alpha` alone, if given).
    pub fn expected_nondetection(&self, set: &MubSet, cfg: &ControlConfig, alpha: Option<usize>) -> Result<f64> {
        match self {
            AttackPolicy::None => Ok(1.0),
            AttackPolicy::PerInput(vs) => match alpha {
                Some(a) => average_nondetection(a, &vs[a], cfg, set),
                None => {
                    let total: f64 = vs
                        .iter()
                        .map(|v| average_nondetection(v.alpha, v, cfg, set))
                        .sum::<Result<f64>>()?;
                    Ok(total / vs.len() as f64)
                }
            },
        }
    }
}

/// Aggregated counters of a simulated session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionStats {
    pub n: usize,
    pub seed: u64,
    pub cycles: u64,
    pub control_rounds: u64,
    pub detections: u64,
    pub message_rounds: u64,
    pub decoded_ok: u64,
    /// `1 - detections / control_rounds`; absent without control rounds.
    pub empirical_nondetection: Option<f64>,
}

impl SessionStats {
    pub const CSV_HEADER: &'static str =
        "n,seed,cycles,control_rounds,detections,message_rounds,decoded_ok,empirical_nondetection";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.seed,
            self.cycles,
            self.control_rounds,
            self.detections,
            self.message_rounds,
            self.decoded_ok,
            self.empirical_nondetection.map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"))
        )
    }
}

/// A protocol run over fixed bases, control configuration and attack.
pub struct Session<'a> {
    set: &'a MubSet,
    cfg: &'a ControlConfig,
    policy: &'a AttackPolicy,
    /// Restrict Bob's control-mode input to one state instead of drawing it.
    pub fixed_alpha: Option<usize>,
}

impl<'a> Session<'a> {
    pub fn new(set: &'a MubSet, cfg: &'a ControlConfig, policy: &'a AttackPolicy) -> Result<Self> {
        cfg.validate_for(set)?;
        if let AttackPolicy::PerInput(vs) = policy {
            if vs.len() != set.dim() {
                return Err(Error::Usage(format!("need {} attack vectors, got {}", set.dim(), vs.len())));
            }
            for (alpha, v) in vs.iter().enumerate() {
                check_attack(alpha, v, set)?;
            }
        }
        Ok(Self { set, cfg, policy, fixed_alpha: None })
    }

    pub fn run(&self, cycles: u64, control_fraction: f64, seed: u64) -> Result<SessionStats> {
        if cycles == 0 {
            return Err(Error::Usage("cycles must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&control_fraction) {
            return Err(Error::Usage(format!("control fraction {control_fraction} outside [0, 1]")));
        }
        let n = self.set.dim();
        if let Some(a) = self.fixed_alpha {
            if a >= n {
                return Err(Error::IndexOutOfRange { index: a, limit: n });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis_pick = WeightedIndex::new(&self.cfg.weights).map_err(|e| Error::Usage(e.to_string()))?;
        let epr = prepare_epr(n)?;

        // control-mode outcome samplers, indexed [alpha][config slot]
        let control = match self.policy {
            AttackPolicy::None => ControlModel::Honest(self.honest_tables(&epr)?),
            AttackPolicy::PerInput(vs) => ControlModel::Attacked(self.attacked_tables(vs)?),
        };
        let message_state = match self.policy {
            AttackPolicy::None => epr.clone(),
            AttackPolicy::PerInput(vs) => epr.attacked(vs)?,
        };

        let mut stats = SessionStats {
            n,
            seed,
            cycles,
            control_rounds: 0,
            detections: 0,
            message_rounds: 0,
            decoded_ok: 0,
            empirical_nondetection: None,
        };
        for _ in 0..cycles {
            if rng.random_bool(control_fraction) {
                stats.control_rounds += 1;
                let slot = basis_pick.sample(&mut rng);
                let detected = match &control {
                    ControlModel::Honest(tables) => {
                        // Alice's outcome is uniform on a maximally entangled pair.
                        let k = rng.random_range(0..n);
                        tables[slot][k].sample(&mut rng) != k
                    }
                    ControlModel::Attacked(tables) => {
                        let alpha = self.fixed_alpha.unwrap_or_else(|| rng.random_range(0..n));
                        tables[alpha][slot].sample(&mut rng) != alpha
                    }
                };
                if detected {
                    stats.detections += 1;
                }
            } else {
                stats.message_rounds += 1;
                let op = EncodingOp::new(rng.random_range(0..n), rng.random_range(0..n));
                if matches!(encode_decode_roundtrip(&message_state, op), Ok(got) if got == op) {
                    stats.decoded_ok += 1;
                }
            }
        }
        if stats.control_rounds > 0 {
            stats.empirical_nondetection = Some(1.0 - stats.detections as f64 / stats.control_rounds as f64);
        }
        Ok(stats)
    }

    /// Bob's conditional outcome distributions, `[slot][alice outcome]`.
    fn honest_tables(&self, epr: &EprState) -> Result<Vec<Vec<WeightedIndex<f64>>>> {
        let n = self.set.dim();
        self.cfg
            .basis_indices
            .iter()
            .map(|&m| {
                (0..n)
                    .map(|k| {
                        let probs = conditional_outcomes(epr, self.set, m, k)?;
                        WeightedIndex::new(probs).map_err(|e| Error::Usage(e.to_string()))
                    })
                    .collect()
            })
            .collect()
    }

    /// Alice's outcome distributions `|c_{alpha,k}|^2`, `[alpha][slot]`.
    fn attacked_tables(&self, vs: &[AttackVector]) -> Result<Vec<Vec<WeightedIndex<f64>>>> {
        vs.iter()
            .map(|v| {
                self.cfg
                    .basis_indices
                    .iter()
                    .map(|&m| {
                        let c = attack_transform(v.alpha, v, m, self.set)?;
                        WeightedIndex::new(c.iter().map(Complex64::norm_sqr))
                            .map_err(|e| Error::Usage(e.to_string()))
                    })
                    .collect()
            })
            .collect()
    }
}

enum ControlModel {
    Honest(Vec<Vec<WeightedIndex<f64>>>),
    Attacked(Vec<Vec<WeightedIndex<f64>>>),
}

/// How Eve behaves in a session configuration file.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum AttackSpec {
    #[default]
    None,
    Optimal,
    /// One amplitude vector used for every input state.
    Uniform(Vec<Complex64>),
    /// One amplitude vector per input state.
    PerInput(Vec<Vec<Complex64>>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AttackSpecRepr {
    Named(String),
    Uniform(Vec<[f64; 2]>),
    PerInput(Vec<Vec<[f64; 2]>>),
}

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(v: Vec<[f64; 2]>) -> Vec<Complex64> {
    v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
}

impl Serialize for AttackSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            AttackSpec::None => AttackSpecRepr::Named("none".into()),
            AttackSpec::Optimal => AttackSpecRepr::Named("optimal".into()),
            AttackSpec::Uniform(v) => AttackSpecRepr::Uniform(to_pairs(v)),
            AttackSpec::PerInput(vs) => AttackSpecRepr::PerInput(vs.iter().map(|v| to_pairs(v)).collect()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AttackSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match AttackSpecRepr::deserialize(d)? {
            AttackSpecRepr::Named(name) => match name.as_str() {
                "none" => Ok(AttackSpec::None),
                "optimal" => Ok(AttackSpec::Optimal),
                other => Err(serde::de::Error::custom(format!(
                    "unknown attack {other:?}, expected \"none\", \"optimal\" or amplitudes"
                ))),
            },
            AttackSpecRepr::Uniform(v) => Ok(AttackSpec::Uniform(from_pairs(v))),
            AttackSpecRepr::PerInput(vs) => Ok(AttackSpec::PerInput(vs.into_iter().map(from_pairs).collect())),
        }
    }
}


/// Session configuration as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub cycles: u64,
    pub control_fraction: f64,
    /// Control bases; empty means all.
    #[serde(default)]
    pub bases: Vec<usize>,
    /// Selection weights; empty means uniform.
    #[serde(default)]
    pub weights: Vec<f64>,
    #[serde(default)]
    pub attack: AttackSpec,
    #[serde(default)]
    pub seed: u64,
    /// Pin Bob's control-mode input state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
}

/// Everything needed to run a session, resolved from a [`SessionConfig`].
#[derive(Debug, Clone)]
pub struct ResolvedSession {
    pub set: MubSet,
    pub cfg: ControlConfig,
    pub policy: AttackPolicy,
}

impl SessionConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn resolve(&self) -> Result<ResolvedSession> {
        let set = MubSet::for_dimension(self.n)?;
        let bases = if self.bases.is_empty() { (0..set.len()).collect() } else { self.bases.clone() };
        let cfg = if self.weights.is_empty() {
            ControlConfig::uniform(bases)?
        } else {
            ControlConfig::new(bases, self.weights.clone())?
        };
        cfg.validate_for(&set)?;
        let n = set.dim();
        let policy = match &self.attack {
            AttackSpec::None => AttackPolicy::None,
            AttackSpec::Optimal => AttackPolicy::optimal(&set, &cfg)?,
            AttackSpec::Uniform(v) => AttackPolicy::uniform(n, CVector::new(v.clone()))?,
            AttackSpec::PerInput(vs) => {
                if vs.len() != n {
                    return Err(Error::Usage(format!("need {n} attack vectors, got {}", vs.len())));
                }
                AttackPolicy::PerInput(
                    vs.iter()
                        .enumerate()
                        .map(|(alpha, v)| AttackVector::normalized(alpha, CVector::new(v.clone())))
                        .collect::<Result<_>>()?,
                )
            }
        };
        Ok(ResolvedSession { set, cfg, policy })
    }
}

/// Resolves and runs a session configuration.
pub fn run_session(config: &SessionConfig) -> Result<SessionStats> {
    let resolved = config.resolve()?;
    let mut session = Session::new(&resolved.set, &resolved.cfg, &resolved.policy)?;
    session.fixed_alpha = config.alpha;
    session.run(config.cycles, config.control_fraction, config.seed)
}
