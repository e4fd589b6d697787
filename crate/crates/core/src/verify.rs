//! Randomized property suites over the theorem layer.
//!
//! Every theorem runs `trials` independent trials. Trial `t` of a theorem
//! draws from its own counter-based stream (seed mixed with a per-theorem
//! salt, stream `t`), so results do not depend on the worker count and any
//! single trial can be replayed from `(seed, theorem, trial)`.
//!
//! Negative controls are false statements. Each searches up to `trials`
//! instances and must find one that breaks the statement.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    adversarial_b, cone_membership, compress, compression_phase_sum, extremal_phase_sums,
    find_eigenphase_entrywise_counterexample, find_product_phase_counterexample, hadamard_counterexample_matrix,
    hadamard_phase_bounds, i_plus_ab_singular_values, kronecker_phases, magnitude_breaker, mixed_margin_check,
    phases_in_principal_range, product_phase_check, rank_margin, rank_verdict, sample_ball, sample_compound_cone,
    schur_complement, top_singular_breaker, ConeSpec, Counterexample, RankVerdict,
};
use crate::compound::{binet_cauchy_residual, verify_inclusions, INCLUSION_TOL};
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::majorization::is_majorized;
use crate::matrix::ComplexMatrix;
use crate::phase::{eigenphases_in, phases};
use crate::random::{self, complex_gaussian, near_identity_pd, sectorial, sectorial_in_window, uniform, TestRng};

/// Default tolerance of the theorem suites (radians for phase statements).
pub const DEFAULT_TOL: f64 = 1e-7;
/// Binet-Cauchy residual bound (relative).
pub const BINET_CAUCHY_TOL: f64 = 1e-9;
/// Required gap, in orders of magnitude, between kept and dropped singular
/// values of `I + AB` for the adversarial constructions.
pub const RANK_GAP_DECADES: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Interlacing,
    Product,
    Cones,
    Compound,
    KronHadamard,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Interlacing,
        Suite::Product,
        Suite::Cones,
        Suite::Compound,
        Suite::KronHadamard,
    ];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Interlacing => "interlacing",
            Suite::Product => "product",
            Suite::Cones => "cones",
            Suite::Compound => "compound",
            Suite::KronHadamard => "kron-hadamard",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    /// Matrix order for the random instances (some statements use smaller
    /// factors, see the individual checks).
    pub n: usize,
    /// Draw the product-majorization pairs from near-identity positive
    /// definite matrices instead of general sectorial ones.
    pub force_pd: bool,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            trials: 100,
            seed: 7,
            n: 5,
            force_pd: false,
            tol: DEFAULT_TOL,
        }
    }
}

/// One failing instance, with enough to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub statement: String,
    pub seed: u64,
    pub trial: u64,
    pub n: usize,
    pub detail: String,
    pub matrices: BTreeMap<String, ComplexMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub suite: Suite,
    pub tol: f64,
    pub trials: usize,
    pub passed: usize,
    pub violations: usize,
    /// Trials that could not be decided (eigenvalue on a branch cut).
    pub skipped: usize,
    /// Smallest margin seen; negative means violated.
    pub worst_slack: Option<f64>,
    pub first_violation: Option<Violation>,
}

impl TheoremResult {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlResult {
    pub name: &'static str,
    /// The false statement.
    pub statement: &'static str,
    pub suite: Suite,
    pub searched: u64,
    /// A breaking instance was found (the expected outcome).
    pub refuted: bool,
    pub witness: Option<Violation>,
}

impl ControlResult {
    /// Controls pass when refuted; with a zero budget they pass vacuously.
    pub fn ok(&self, budget: usize) -> bool {
        self.refuted || budget == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub theorems: Vec<TheoremResult>,
    pub controls: Vec<ControlResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.theorems.iter().filter_map(|t| t.first_violation.as_ref())
    }
}

struct Outcome {
    holds: bool,
    slack: f64,
    detail: String,
    matrices: Vec<(&'static str, ComplexMatrix)>,
}

impl Outcome {
    fn new(holds: bool, slack: f64) -> Self {
        Outcome {
            holds,
            slack,
            detail: String::new(),
            matrices: Vec::new(),
        }
    }

    fn with(mut self, name: &'static str, m: &ComplexMatrix) -> Self {
        self.matrices.push((name, m.clone()));
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Copy)]
struct Params {
    n: usize,
    tol: f64,
    force_pd: bool,
}

type Check = fn(&Params, &mut TestRng) -> Result<Outcome>;

struct Theorem {
    name: &'static str,
    statement: &'static str,
    suite: Suite,
    salt: u64,
    tol: Option<f64>,
    check: Check,
}

const THEOREMS: &[Theorem] = &[
    Theorem {
        name: "eigenphase-majorization",
        statement: "arg lambda(C) is majorized by phi(C)",
        suite: Suite::Interlacing,
        salt: 1,
        tol: None,
        check: eigenphase_majorization,
    },
    Theorem {
        name: "compression-interlacing",
        statement: "phi_j(C) >= phi_j(X*CX) >= phi_{j+k}(C) for full-rank n x (n-k) X",
        suite: Suite::Interlacing,
        salt: 2,
        tol: None,
        check: compression_interlacing,
    },
    Theorem {
        name: "schur-interlacing",
        statement: "phi_j(C) >= phi_j(C/11) >= phi_{j+k}(C)",
        suite: Suite::Interlacing,
        salt: 3,
        tol: None,
        check: schur_interlacing,
    },
    Theorem {
        name: "extremal-sums",
        statement: "phase sums of k-dimensional compressions lie in [sum of k smallest, sum of k largest] and both ends are attained",
        suite: Suite::Interlacing,
        salt: 4,
        tol: None,
        check: extremal_sums,
    },
    Theorem {
        name: "product-majorization",
        statement: "arg lambda(AB) is majorized by phi(A) + phi(B)",
        suite: Suite::Product,
        salt: 5,
        tol: None,
        check: product_majorization,
    },
    Theorem {
        name: "sum-cone-closure",
        statement: "A, B in C[a, b] with b - a < pi implies A + B in C[a, b]",
        suite: Suite::Cones,
        salt: 6,
        tol: None,
        check: sum_cone_closure,
    },
    Theorem {
        name: "rank-margin-sufficiency",
        statement: "B in C_k[margin - 0.05] or |B| < 1/sigma_k(A) keeps rank(I + AB) > n - k",
        suite: Suite::Cones,
        salt: 7,
        tol: None,
        check: rank_margin_sufficiency,
    },
    Theorem {
        name: "rank-margin-necessity",
        statement: "the adversarial and smallest-norm B at the margins give rank(I + AB) = n - k",
        suite: Suite::Cones,
        salt: 8,
        tol: None,
        check: rank_margin_necessity,
    },
    Theorem {
        name: "mixed-margin",
        statement: "B in B[g] or C_1[a] below both margins keeps I + AB nonsingular",
        suite: Suite::Cones,
        salt: 9,
        tol: None,
        check: mixed_margin,
    },
    Theorem {
        name: "compound-inclusions",
        statement: "compound spectra lie in the quotient, plain and product compound ranges; W_k(A) lies in W(A_(k))",
        suite: Suite::Compound,
        salt: 10,
        tol: Some(INCLUSION_TOL),
        check: compound_inclusions,
    },
    Theorem {
        name: "binet-cauchy",
        statement: "(AB)_(k) = A_(k) B_(k)",
        suite: Suite::Compound,
        salt: 11,
        tol: Some(BINET_CAUCHY_TOL),
        check: binet_cauchy,
    },
    Theorem {
        name: "kronecker-phases",
        statement: "phi(A (x) B) = {phi_i(A) + phi_j(B)} when the spreads sum below pi",
        suite: Suite::KronHadamard,
        salt: 12,
        tol: None,
        check: kronecker,
    },
    Theorem {
        name: "hadamard-bounds",
        statement: "phi_n(A) + phi_n(B) <= phi(A o B) <= phi_1(A) + phi_1(B)",
        suite: Suite::KronHadamard,
        salt: 13,
        tol: None,
        check: hadamard,
    },
];

fn stream_seed(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Matrix order for statements that need a proper sub-block.
fn order(p: &Params) -> usize {
    p.n.max(2)
}

fn eigenphase_majorization(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let c = sectorial_in_window(rng, p.n, PI, 0.95 * PI).matrix;
    let pv = phases(&c, None)?;
    let ang = eigenphases_in(&c, pv.theta)?;
    let r = is_majorized(&ang, &pv.phases, p.tol)?;
    Ok(Outcome::new(r.holds, r.slack).with("c", &c))
}

fn compression_interlacing(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = order(p);
    let c = sectorial_in_window(rng, n, PI, 0.95 * PI).matrix;
    let k = rng.random_range(1..n);
    let x = complex_gaussian(rng, n, n - k);
    let r = compress(&c, &x, p.tol)?;
    Ok(Outcome::new(r.holds, r.worst_slack).with("c", &c).with("x", &x))
}

fn schur_interlacing(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = order(p);
    let c = sectorial_in_window(rng, n, PI, 0.95 * PI).matrix;
    let k = rng.random_range(1..n);
    let r = schur_complement(&c, k, p.tol)?;
    Ok(Outcome::new(r.holds, r.worst_slack)
        .with("c", &c)
        .detail(format!("k = {k}")))
}

/// Random compressions per extremal-sum trial.
const EXTREMAL_DRAWS: usize = 3;

fn extremal_sums(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let c = sectorial_in_window(rng, n, PI, 0.95 * PI).matrix;
    let k = rng.random_range(1..=n);
    let e = extremal_phase_sums(&c, k)?;
    let theta = e.parent.theta;
    let hit_max = compression_phase_sum(&c, &e.x_max, theta)?;
    let hit_min = compression_phase_sum(&c, &e.x_min, theta)?;
    let mut slack = -(hit_max - e.max_sum).abs().max((hit_min - e.min_sum).abs());
    for _ in 0..EXTREMAL_DRAWS {
        let x = complex_gaussian(rng, n, k);
        let s = compression_phase_sum(&c, &x, theta)?;
        slack = slack.min(e.max_sum - s).min(s - e.min_sum);
    }
    Ok(Outcome::new(slack >= -p.tol, slack)
        .with("c", &c)
        .detail(format!("k = {k}")))
}

fn product_majorization(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let (a, b) = if p.force_pd {
        (near_identity_pd(rng, p.n, 0.8), near_identity_pd(rng, p.n, 0.8))
    } else {
        (
            sectorial_in_window(rng, p.n, PI, 0.95 * PI).matrix,
            sectorial_in_window(rng, p.n, PI, 0.95 * PI).matrix,
        )
    };
    let r = product_phase_check(&a, &b, p.tol)?;
    Ok(Outcome::new(r.majorization.holds, r.majorization.slack)
        .with("a", &a)
        .with("b", &b))
}

fn sum_cone_closure(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let width = uniform(rng, 0.1, PI - 0.1);
    let center = uniform(rng, -PI, PI);
    let (alpha, beta) = (center - width / 2.0, center + width / 2.0);
    let a = sectorial(rng, p.n, alpha, beta).matrix;
    let b = sectorial(rng, p.n, alpha, beta).matrix;
    let m = cone_membership(&(&a + &b), &ConeSpec::Sector { alpha, beta }, p.tol)?;
    Ok(Outcome::new(m.member, m.slack)
        .with("a", &a)
        .with("b", &b)
        .detail(format!("cone [{alpha}, {beta}]")))
}

/// Sectorial `A` with phases well inside `(-pi, pi)`.
fn margin_matrix(n: usize, rng: &mut TestRng) -> ComplexMatrix {
    sectorial_in_window(rng, n, PI - 0.2, 0.95 * PI).matrix
}

/// Rank of `I + AB` is above `n - k`: `sigma_{n-k+1}` is not a drop.
fn keeps_rank(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> (bool, f64) {
    let n = a.rows();
    let s = i_plus_ab_singular_values(a, b);
    let sig = s[n - k];
    (rank_verdict(sig, s[0]) != RankVerdict::Drop, sig / (1.0 + s[0]))
}

fn rank_margin_sufficiency(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let a = margin_matrix(n, rng);
    let k = rng.random_range(1..=n);
    let m = rank_margin(&a, k)?;
    let alpha = m.phase_margin_alpha - 0.05;
    let gamma = 0.95 * m.magnitude_margin_gamma;
    let mut holds = true;
    let mut slack = f64::INFINITY;
    let mut out = Outcome::new(true, 0.0).with("a", &a);
    for j in 0..4 {
        let b = if j % 2 == 0 {
            sample_compound_cone(rng, n, k, alpha)
        } else {
            sample_ball(rng, n, gamma)
        };
        let (ok, s) = keeps_rank(&a, &b, k);
        slack = slack.min(s);
        if !ok && holds {
            holds = false;
            out = out.with("b", &b);
        }
    }
    out.holds = holds;
    out.slack = slack;
    Ok(out.detail(format!("k = {k}")))
}

/// `k` singular values of `I + AB` drop and the rest stay, with a clear gap.
fn drops_exactly(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> (bool, f64) {
    let n = a.rows();
    let s = i_plus_ab_singular_values(a, b);
    let scale = 1.0 + s[0];
    let dropped = s[n - k..].iter().all(|&x| rank_verdict(x, s[0]) == RankVerdict::Drop);
    if k == n {
        return (dropped, (crate::analysis::cones::RANK_DROP_TOL * scale / s[n - 1].max(1e-300)).log10());
    }
    let kept = rank_verdict(s[n - k - 1], s[0]) == RankVerdict::Keep;
    let gap = (s[n - k - 1] / s[n - k].max(1e-300)).log10() - RANK_GAP_DECADES;
    (dropped && kept && gap >= 0.0, gap)
}

fn rank_margin_necessity(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let a = margin_matrix(n, rng);
    let k = rng.random_range(1..=n);
    let adv = adversarial_b(&a, k)?;
    let (ok_phase, gap_phase) = drops_exactly(&a, &adv.b, k);
    let mut in_cone = true;
    if adv.sectorial {
        let m = cone_membership(
            &adv.b,
            &ConeSpec::Compound {
                k,
                alpha: adv.alpha_required,
            },
            1e-6,
        )?;
        in_cone = m.member;
    }
    let mb = magnitude_breaker(&a, k)?;
    let (ok_mag, gap_mag) = drops_exactly(&a, &mb, k);
    let norm_ok = (singular_values(&mb)[0] * singular_values(&a)[k - 1] - 1.0).abs() < 1e-9;
    Ok(Outcome::new(ok_phase && ok_mag && in_cone && norm_ok, gap_phase.min(gap_mag))
        .with("a", &a)
        .with("b_phase", &adv.b)
        .with("b_magnitude", &mb)
        .detail(format!(
            "k = {k}, in cone {in_cone}, breaker norm ok {norm_ok}"
        )))
}

fn mixed_margin(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let a = margin_matrix(n, rng);
    let pv = phases_in_principal_range(&a)?;
    let gamma_limit = 1.0 / singular_values(&a)[0];
    let alpha_limit = (PI - pv.max()).min(PI + pv.min());
    let seed = rng.random();
    let r = mixed_margin_check(&a, 0.95 * gamma_limit, alpha_limit - 0.05, 4, seed)?;
    let breaker = top_singular_breaker(&a)?;
    let (drops, _) = drops_exactly(&a, &breaker, 1);
    let sigma_scale = r.min_sigma;
    Ok(Outcome::new(r.verdict && r.violations == 0 && drops, sigma_scale)
        .with("a", &a)
        .detail(format!(
            "verdict {}, violations {}, breaker drops {drops}",
            r.verdict, r.violations
        )))
}

fn compound_inclusions(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let a = complex_gaussian(rng, n, n);
    let b = sectorial_in_window(rng, n, PI, 0.9 * PI).matrix;
    let k = rng.random_range(1..=n.min(3));
    let seed = rng.random();
    let r = verify_inclusions(&a, &b, k, 2, seed)?;
    let worst = [r.quotient, r.spectrum, r.compound_field, r.product]
        .iter()
        .map(|s| s.worst_residual)
        .fold(0.0, f64::max);
    Ok(Outcome::new(r.passed, INCLUSION_TOL - worst)
        .with("a", &a)
        .with("b", &b)
        .detail(format!("k = {k}, sample seed {seed}")))
}

fn binet_cauchy(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let n = p.n;
    let a = complex_gaussian(rng, n, n);
    let b = complex_gaussian(rng, n, n);
    let k = rng.random_range(1..=n);
    let r = binet_cauchy_residual(&a, &b, k)?;
    Ok(Outcome::new(r <= BINET_CAUCHY_TOL, BINET_CAUCHY_TOL - r)
        .with("a", &a)
        .with("b", &b)
        .detail(format!("k = {k}")))
}

fn kronecker(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let na = rng.random_range(1..=p.n.min(3));
    let nb = rng.random_range(1..=p.n.min(3));
    let a = sectorial_in_window(rng, na, PI, 0.45 * PI).matrix;
    let b = sectorial_in_window(rng, nb, PI, 0.45 * PI).matrix;
    let r = kronecker_phases(&a, &b)?;
    Ok(Outcome::new(r.max_deviation <= p.tol, -r.max_deviation)
        .with("a", &a)
        .with("b", &b))
}

fn hadamard(p: &Params, rng: &mut TestRng) -> Result<Outcome> {
    let a = sectorial_in_window(rng, p.n, PI, 0.45 * PI).matrix;
    let b = sectorial_in_window(rng, p.n, PI, 0.45 * PI).matrix;
    let r = hadamard_phase_bounds(&a, &b, p.tol)?;
    let slack = (r.upper_bound - r.phases.max()).min(r.phases.min() - r.lower_bound);
    Ok(Outcome::new(r.holds, slack).with("a", &a).with("b", &b))
}

enum TrialResult {
    Decided(Outcome),
    Skipped,
    Failed(String),
}

fn run_trial(th: &Theorem, p: &Params, seed: u64, trial: u64) -> TrialResult {
    let mut rng = random::trial_rng(stream_seed(seed, th.salt), trial);
    match (th.check)(p, &mut rng) {
        Ok(o) => TrialResult::Decided(o),
        Err(Error::BranchAmbiguity { .. }) => TrialResult::Skipped,
        Err(e) => TrialResult::Failed(e.to_string()),
    }
}

fn run_theorem(th: &Theorem, cfg: &VerifyConfig) -> TheoremResult {
    let tol = th.tol.unwrap_or(cfg.tol);
    let p = Params {
        n: cfg.n,
        tol,
        force_pd: cfg.force_pd,
    };
    let results: Vec<TrialResult> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(th, &p, cfg.seed, t))
        .collect();
    let mut out = TheoremResult {
        name: th.name,
        statement: th.statement,
        suite: th.suite,
        tol,
        trials: cfg.trials,
        passed: 0,
        violations: 0,
        skipped: 0,
        worst_slack: None,
        first_violation: None,
    };
    for (t, r) in results.into_iter().enumerate() {
        let violation = match r {
            TrialResult::Skipped => {
                out.skipped += 1;
                continue;
            }
            TrialResult::Decided(o) => {
                out.worst_slack = Some(out.worst_slack.map_or(o.slack, |w| w.min(o.slack)));
                if o.holds {
                    out.passed += 1;
                    continue;
                }
                Violation {
                    statement: th.statement.into(),
                    seed: cfg.seed,
                    trial: t as u64,
                    n: cfg.n,
                    detail: format!("slack {:e}; {}", o.slack, o.detail),
                    matrices: o.matrices.into_iter().map(|(k, m)| (k.to_string(), m)).collect(),
                }
            }
            TrialResult::Failed(msg) => Violation {
                statement: th.statement.into(),
                seed: cfg.seed,
                trial: t as u64,
                n: cfg.n,
                detail: msg,
                matrices: BTreeMap::new(),
            },
        };
        out.violations += 1;
        if out.first_violation.is_none() {
            out.first_violation = Some(violation);
        }
    }
    out
}

fn control_violation(statement: &str, seed: u64, n: usize, c: Counterexample) -> Violation {
    let mut matrices = BTreeMap::from([("a".to_string(), c.a)]);
    if let Some(b) = c.b {
        matrices.insert("b".into(), b);
    }
    Violation {
        statement: statement.into(),
        seed,
        trial: c.trial,
        n,
        detail: format!("lhs {:?} vs rhs {:?}", c.lhs, c.rhs),
        matrices,
    }
}

fn run_controls(cfg: &VerifyConfig) -> Result<Vec<ControlResult>> {
    let budget = cfg.trials as u64;
    let mut out = Vec::new();
    let n = order(&Params {
        n: cfg.n,
        tol: cfg.tol,
        force_pd: cfg.force_pd,
    });
    if cfg.suite.includes(Suite::Interlacing) {
        const S: &str = "arg lambda_i(A) <= phi_i(A) for every i";
        let seed = stream_seed(cfg.seed, 101);
        let found = find_eigenphase_entrywise_counterexample(seed, budget, n)?;
        out.push(ControlResult {
            name: "eigenphase-entrywise",
            statement: S,
            suite: Suite::Interlacing,
            searched: found.as_ref().map_or(budget, |c| c.trial + 1),
            refuted: found.is_some(),
            witness: found.map(|c| control_violation(S, seed, n, c)),
        });
    }
    if cfg.suite.includes(Suite::Product) {
        const S: &str = "phi(AB) is majorized by phi(A) + phi(B) for positive definite A, B";
        let seed = stream_seed(cfg.seed, 102);
        let found = find_product_phase_counterexample(seed, budget, n)?;
        out.push(ControlResult {
            name: "product-phase-majorization",
            statement: S,
            suite: Suite::Product,
            searched: found.as_ref().map_or(budget, |c| c.trial + 1),
            refuted: found.is_some(),
            witness: found.map(|c| control_violation(S, seed, n, c)),
        });
    }
    if cfg.suite.includes(Suite::KronHadamard) && budget > 0 {
        const S: &str = "phi(A o B) is majorized by phi(A) + phi(B)";
        let a = hadamard_counterexample_matrix();
        let i = ComplexMatrix::identity(a.rows());
        let r = hadamard_phase_bounds(&a, &i, cfg.tol)?;
        let maj = is_majorized(&r.phases.phases, &r.phase_sum, 1e-8)?;
        let refuted = !maj.holds;
        out.push(ControlResult {
            name: "hadamard-majorization",
            statement: S,
            suite: Suite::KronHadamard,
            searched: 1,
            refuted,
            witness: refuted.then(|| Violation {
                statement: S.into(),
                seed: cfg.seed,
                trial: 0,
                n: a.rows(),
                detail: format!("phi(A o I) = {:?}, phi(A) + phi(I) = {:?}", r.phases.phases, r.phase_sum),
                matrices: BTreeMap::from([("a".to_string(), a), ("b".to_string(), i)]),
            }),
        });
    }
    Ok(out)
}

/// Runs the selected suites. A report passes when no theorem has a
/// violation and every negative control was refuted.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(cfg.tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be nonnegative", cfg.tol)));
    }
    let theorems: Vec<TheoremResult> = THEOREMS
        .iter()
        .filter(|t| cfg.suite.includes(t.suite))
        .map(|t| run_theorem(t, cfg))
        .collect();
    let controls = run_controls(cfg)?;
    let passed = theorems.iter().all(TheoremResult::ok) && controls.iter().all(|c| c.ok(cfg.trials));
    Ok(VerifyReport {
        config: *cfg,
        theorems,
        controls,
        passed,
    })
}

/// Regenerates the instance of one trial, for reproducer files.
pub fn replay(theorem: &str, cfg: &VerifyConfig, trial: u64) -> Result<bool> {
    let th = THEOREMS
        .iter()
        .find(|t| t.name == theorem)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem '{theorem}'")))?;
    let p = Params {
        n: cfg.n,
        tol: th.tol.unwrap_or(cfg.tol),
        force_pd: cfg.force_pd,
    };
    match run_trial(th, &p, cfg.seed, trial) {
        TrialResult::Decided(o) => Ok(o.holds),
        TrialResult::Skipped => Ok(true),
        TrialResult::Failed(_) => Ok(false),
    }
}

pub fn theorem_names() -> Vec<&'static str> {
    THEOREMS.iter().map(|t| t.name).collect()
}
