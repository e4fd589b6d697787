//! Command-line front end.
//!
//! Every command prints one JSON report on stdout and a short human summary
//! on stderr. Reports are byte-for-byte reproducible for fixed inputs, flags
//! and seed; wall-clock timings are only included with `--timings`.
//!
//! Exit codes: 0 ok, 1 property violation, 2 parse or usage error,
//! 3 not sectorial, 4 domain error, 5 infeasible completion or split.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    adversarial_b, i_plus_ab_singular_values, magnitude_breaker, rank_margin, rank_verdict, sample_ball,
    sample_compound_cone, RankVerdict,
};
use crate::completion::{certificate_slack, complete, decompose_banded, BandedPartial};
use crate::error::Error;
use crate::io::{read_matrix, write_matrix, FloatFormat, PlotData};
use crate::matrix::ComplexMatrix;
use crate::numrange::{boundary_trace, classify_sector};
use crate::phase::{gcf_from, phases, phases_via_inverse_conjugate, real_sectorial, sectorial_decomposition, spd_from};
use crate::random;
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_SECTORIAL: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;
pub const EXIT_INFEASIBLE: i32 = 5;

/// Default seed when neither `--seed` nor `PHASEKIT_SEED` is given.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "phasekit", version, about = "Phases of sectorial matrices and related checks")]
pub struct Cli {
    /// Show angles in degrees in the stderr summary (JSON stays in radians).
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Write matrix files with hex-float entries.
    #[arg(long, global = true)]
    pub hexfloat: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseMethod {
    Congruence,
    InverseConjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecompKind {
    Sectorial,
    Spd,
    Gcf,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    /// `P* diag(e^{i phi}) P` with phases uniform in `[lo, hi]`.
    Sectorial,
    /// Real sectorial with rotation blocks up to `hi`.
    RealSectorial,
    /// Hermitian positive definite.
    Pd,
    /// Complex Gaussian entries.
    Gaussian,
    /// Tridiagonal partial matrix (scalar blocks, p = 1) in `C[lo, hi]`.
    Partial,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed.
    #[arg(long, env = "PHASEKIT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phases, canonical rotation and field angle of a matrix.
    Phases {
        file: PathBuf,
        /// Lower end of the branch interval `(theta, theta + pi)`.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, value_enum, default_value_t = PhaseMethod::Congruence)]
        method: PhaseMethod,
    },
    /// Sectorial decomposition, symmetric polar decomposition or
    /// generalized Cholesky factorization.
    Decomp {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DecompKind::Sectorial)]
        kind: DecompKind,
        /// Directory for the factor files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Boundary of the numerical range for plotting.
    Numrange {
        file: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Plot file (points, phi_max, phi_min, supporting rays).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase and magnitude margins of `rank(I + AB)`.
    Margin {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Random `B` inside both margins to test for rank drops.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Distance below the margins for the sampled `B`.
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
        #[command(flatten)]
        seed: SeedArg,
        /// Write the adversarial `B` to this file.
        #[arg(long)]
        emit_adversary: Option<PathBuf>,
    },
    /// Complete a banded partial matrix inside its cone.
    Complete {
        partial: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a banded matrix in a cone into cone members on windows.
    Split {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Comma-separated block sizes (default: all ones).
        #[arg(long, value_delimiter = ',')]
        block_sizes: Option<Vec<usize>>,
        /// Directory for the part files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Randomized theorem suites and negative controls.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Use positive definite pairs in the product suite.
        #[arg(long)]
        force_pd: bool,
        #[arg(long, default_value_t = verify::DEFAULT_TOL)]
        tol: f64,
        /// Directory for reproducer files of violations.
        #[arg(long, default_value = ".")]
        repro_dir: PathBuf,
    },
    /// Write a random test matrix.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        hi: f64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        message: format!("{}: {e}", path.display()),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::NotSectorial { .. } | Error::ZeroMatrix => EXIT_NOT_SECTORIAL,
        Error::InfeasibleWindow { .. } | Error::NotInCone { .. } | Error::NotBanded { .. } => EXIT_INFEASIBLE,
        _ => EXIT_DOMAIN,
    }
}

#[derive(Debug, Serialize)]
struct Report {
    command: &'static str,
    version: &'static str,
    /// SHA-256 over the input bytes and the canonical arguments.
    inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    tolerances: BTreeMap<&'static str, f64>,
    outputs: Value,
    verdicts: BTreeMap<&'static str, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<BTreeMap<&'static str, f64>>,
}

struct Ctx {
    degrees: bool,
    timings: bool,
    format: FloatFormat,
    started: Instant,
}

impl Ctx {
    fn angle(&self, x: f64) -> String {
        if self.degrees {
            format!("{:.6} deg", x.to_degrees())
        } else {
            format!("{x:.12}")
        }
    }

    fn angles(&self, xs: &[f64]) -> String {
        let parts: Vec<String> = xs.iter().map(|&x| self.angle(x)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn write(&self, path: &Path, m: &ComplexMatrix) -> Result<(), Failure> {
        write_matrix(path, m, self.format).map_err(|e| io_failure(path, e))
    }

    fn report(
        &self,
        command: &'static str,
        digest: String,
        seed: Option<u64>,
        tolerances: &[(&'static str, f64)],
        outputs: Value,
        verdicts: &[(&'static str, bool)],
    ) -> Report {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            inputs_digest: digest,
            seed,
            tolerances: tolerances.iter().copied().collect(),
            outputs,
            verdicts: verdicts.iter().copied().collect(),
            timings: self
                .timings
                .then(|| BTreeMap::from([("total_seconds", self.started.elapsed().as_secs_f64())])),
        }
    }
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read_input(path: &Path) -> Result<(ComplexMatrix, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    let m = read_matrix(path)?;
    Ok((m, bytes))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn rel_residual(c: &ComplexMatrix, r: &ComplexMatrix) -> f64 {
    (c - r).norm_fro() / c.norm_fro().max(1e-300)
}

/// Runs one command; `Ok` carries the report and the exit code.
fn dispatch(cli: &Cli, ctx: &Ctx) -> Result<(Report, i32), Failure> {
    match &cli.command {
        Command::Phases { file, theta, method } => {
            let (c, bytes) = read_input(file)?;
            let args = format!("{theta:?} {method:?}");
            let info = classify_sector(&c)?;
            let dg = digest(&[&bytes, args.as_bytes()]);
            let tol = [("sector_tol_rel", crate::numrange::SECTOR_TOL_REL)];
            if !info.sectorial {
                eprintln!("not sectorial (accretivity {:e})", info.accretivity);
                let out = json!({ "sectorial": false, "accretivity": info.accretivity });
                return Ok((ctx.report("phases", dg, None, &tol, out, &[("sectorial", false)]), EXIT_NOT_SECTORIAL));
            }
            let pv = match method {
                PhaseMethod::Congruence => phases(&c, *theta)?,
                PhaseMethod::InverseConjugate => {
                    let p = phases_via_inverse_conjugate(&c)?;
                    match theta {
                        Some(t) => p.rebranch(*t)?,
                        None => p,
                    }
                }
            };
            eprintln!("phases: {}", ctx.angles(&pv.phases));
            eprintln!("field angle: {}", ctx.angle(info.field_angle));
            let out = json!({
                "sectorial": true,
                "phases": pv.phases,
                "theta": pv.theta,
                "gamma_star": info.gamma_star,
                "field_angle": info.field_angle,
                "phi_max": info.phi_max,
                "phi_min": info.phi_min,
                "accretivity": info.accretivity,
                "strictly_accretive": pv.phases.iter().all(|p| p.abs() < std::f64::consts::FRAC_PI_2),
            });
            Ok((ctx.report("phases", dg, None, &tol, out, &[("sectorial", true)]), EXIT_OK))
        }
        Command::Decomp { file, kind, out_dir } => {
            let (c, bytes) = read_input(file)?;
            let dg = digest(&[&bytes, format!("{kind:?}").as_bytes()]);
            let (factors, recon): (Vec<(&str, ComplexMatrix)>, ComplexMatrix) = match kind {
                DecompKind::Real => {
                    let r = real_sectorial(&c)?;
                    let recon = r.d.congruence(&r.t);
                    (vec![("t", r.t), ("d", r.d)], recon)
                }
                _ => {
                    let dec = sectorial_decomposition(&c)?;
                    match kind {
                        DecompKind::Spd => {
                            let s = spd_from(&dec)?;
                            let recon = s.reconstruct();
                            (vec![("p", s.p), ("u", s.u)], recon)
                        }
                        DecompKind::Gcf => {
                            let g = gcf_from(&dec)?;
                            let recon = g.reconstruct();
                            (vec![("r", g.r), ("w", g.w)], recon)
                        }
                        _ => {
                            let recon = dec.reconstruct();
                            (vec![("t", dec.t), ("d", dec.d)], recon)
                        }
                    }
                }
            };
            let residual = rel_residual(&c, &recon);
            let mut files = BTreeMap::new();
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                for (name, m) in &factors {
                    let path = dir.join(format!("{name}.json"));
                    ctx.write(&path, m)?;
                    files.insert(*name, path.display().to_string());
                }
            }
            eprintln!("relative reconstruction residual {residual:e}");
            let ok = residual <= 1e-9;
            let out = json!({
                "kind": format!("{kind:?}").to_lowercase(),
                "factors": factors.iter().map(|(k, m)| (k.to_string(), to_value(m))).collect::<BTreeMap<_, _>>(),
                "relative_residual": residual,
                "files": files,
            });
            let code = if ok { EXIT_OK } else { EXIT_VIOLATION };
            Ok((
                ctx.report("decomp", dg, None, &[("reconstruction", 1e-9)], out, &[("reconstructs", ok)]),
                code,
            ))
        }
        Command::Numrange { file, samples, out } => {
            let (c, bytes) = read_input(file)?;
            let dg = digest(&[&bytes, samples.to_string().as_bytes()]);
            let info = classify_sector(&c)?;
            let trace = boundary_trace(&c, *samples)?;
            let plot = PlotData::new(&trace, &info);
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&plot).expect("plot serializes");
                fs::write(path, text + "\n").map_err(|e| io_failure(path, e))?;
            }
            if info.sectorial {
                eprintln!(
                    "supporting rays at {} and {}",
                    ctx.angle(info.phi_max),
                    ctx.angle(info.phi_min)
                );
            } else {
                eprintln!("not sectorial: W(C) meets every half-plane boundary through 0");
            }
            let report = ctx.report(
                "numrange",
                dg,
                None,
                &[("sector_tol_rel", crate::numrange::SECTOR_TOL_REL)],
                to_value(&plot),
                &[("sectorial", info.sectorial)],
            );
            let code = if info.sectorial { EXIT_OK } else { EXIT_NOT_SECTORIAL };
            Ok((report, code))
        }
        Command::Margin {
            file,
            k,
            trials,
            slack,
            seed,
            emit_adversary,
        } => {
            let (a, bytes) = read_input(file)?;
            let n = a.rows();
            let seed = seed.seed;
            let dg = digest(&[&bytes, format!("{k} {trials} {slack}").as_bytes()]);
            let m = rank_margin(&a, *k)?;
            let adv = adversarial_b(&a, *k)?;
            let breaker = magnitude_breaker(&a, *k)?;
            let sv_adv = i_plus_ab_singular_values(&a, &adv.b);
            let sv_mag = i_plus_ab_singular_values(&a, &breaker);
            let drops = |s: &[f64]| s.iter().filter(|&&x| rank_verdict(x, s[0]) == RankVerdict::Drop).count();
            if let Some(path) = emit_adversary {
                ctx.write(path, &adv.b)?;
            }
            let alpha = m.phase_margin_alpha - slack;
            let gamma = m.magnitude_margin_gamma * (1.0 - slack);
            let mut violations = 0;
            for t in 0..*trials {
                let mut rng = random::trial_rng(seed, t as u64);
                let b = if t % 2 == 0 {
                    sample_compound_cone(&mut rng, n, *k, alpha)
                } else {
                    sample_ball(&mut rng, n, gamma)
                };
                let s = i_plus_ab_singular_values(&a, &b);
                if rank_verdict(s[n - k], s[0]) == RankVerdict::Drop {
                    violations += 1;
                }
            }
            eprintln!(
                "phase margin {}, magnitude margin {:.6e}, binding side {:?}",
                ctx.angle(m.phase_margin_alpha),
                m.magnitude_margin_gamma,
                m.binding_side
            );
            let adv_ok = drops(&sv_adv) == *k;
            let mag_ok = drops(&sv_mag) == *k;
            let out = json!({
                "margin": to_value(&m),
                "adversarial": {
                    "alpha_required": adv.alpha_required,
                    "sectorial": adv.sectorial,
                    "singular_values": sv_adv,
                    "rank": n - drops(&sv_adv),
                },
                "magnitude_breaker": {
                    "norm": crate::linalg::singular_values(&breaker)[0],
                    "singular_values": sv_mag,
                    "rank": n - drops(&sv_mag),
                },
                "sampled": { "trials": trials, "alpha": alpha, "gamma": gamma, "violations": violations },
            });
            let ok = adv_ok && mag_ok && violations == 0;
            let report = ctx.report(
                "margin",
                dg,
                Some(seed),
                &[
                    ("rank_drop", crate::analysis::cones::RANK_DROP_TOL),
                    ("rank_keep", crate::analysis::cones::RANK_KEEP_TOL),
                ],
                out,
                &[
                    ("adversary_drops_rank", adv_ok),
                    ("breaker_drops_rank", mag_ok),
                    ("samples_keep_rank", violations == 0),
                ],
            );
            Ok((report, if ok { EXIT_OK } else { EXIT_VIOLATION }))
        }
        Command::Complete { partial, out } => {
            let bytes = fs::read(partial).map_err(|e| Failure {
                code: EXIT_PARSE,
                message: format!("{}: {e}", partial.display()),
            })?;
            let bp: BandedPartial =
                serde_json::from_slice(&bytes).map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
            let c = complete(&bp)?;
            let slack = certificate_slack(&c, bp.alpha, bp.beta)?;
            let agree = (&bp.assemble() - &BandedPartial::from_matrix(&c, &bp.block_sizes, bp.p, bp.alpha, bp.beta)?.assemble())
                .norm_fro();
            if let Some(path) = out {
                ctx.write(path, &c)?;
            }
            eprintln!("completed {}x{} matrix, certificate slack {slack:e}", c.rows(), c.cols());
            let ok = slack >= -1e-7 && agree <= 1e-12 * c.norm_fro().max(1.0);
            let output = json!({ "completed": to_value(&c), "certificate_slack": slack, "specified_residual": agree });
            let report = ctx.report(
                "complete",
                digest(&[&bytes]),
                None,
                &[("membership", 1e-7), ("range", crate::completion::RANGE_TOL)],
                output,
                &[("in_cone", ok)],
            );
            Ok((report, if ok { EXIT_OK } else { EXIT_VIOLATION }))
        }
        Command::Split {
            file,
            p,
            alpha,
            beta,
            block_sizes,
            out_dir,
        } => {
            let (c, bytes) = read_input(file)?;
            let sizes = block_sizes.clone().unwrap_or_else(|| vec![1; c.rows()]);
            let dg = digest(&[&bytes, format!("{p} {alpha} {beta} {sizes:?}").as_bytes()]);
            let dec = decompose_banded(&c, &sizes, *p, *alpha, *beta)?;
            let residual = (&c - &dec.sum()).norm_fro();
            let mut slacks = Vec::new();
            for part in &dec.parts {
                slacks.push(certificate_slack(&part.core, *alpha, *beta)?);
            }
            let mut files = Vec::new();
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                for (l, _) in dec.parts.iter().enumerate() {
                    let path = dir.join(format!("part-{l}.json"));
                    ctx.write(&path, &dec.embed(l))?;
                    files.push(path.display().to_string());
                }
            }
            let ok = residual <= 1e-9 * c.norm_fro().max(1.0) && slacks.iter().all(|&s| s >= -1e-7);
            eprintln!("{} parts, sum residual {residual:e}", dec.parts.len());
            let out = json!({ "decomposition": to_value(&dec), "sum_residual": residual, "part_slacks": slacks, "files": files });
            let report = ctx.report(
                "split",
                dg,
                None,
                &[("membership", 1e-7), ("sum", 1e-9)],
                out,
                &[("parts_in_cone_and_sum", ok)],
            );
            Ok((report, if ok { EXIT_OK } else { EXIT_VIOLATION }))
        }
        Command::Verify {
            suite,
            trials,
            seed,
            n,
            force_pd,
            tol,
            repro_dir,
        } => {
            let cfg = VerifyConfig {
                suite: *suite,
                trials: *trials,
                seed: seed.seed,
                n: *n,
                force_pd: *force_pd,
                tol: *tol,
            };
            let r = verify::run(&cfg)?;
            for t in &r.theorems {
                eprintln!(
                    "{:26} {:>5}/{:<5} skipped {:<3} worst slack {}",
                    t.name,
                    t.passed,
                    t.trials,
                    t.skipped,
                    t.worst_slack.map_or("-".into(), |s| format!("{s:.3e}"))
                );
            }
            for c in &r.controls {
                let status = match (c.refuted, cfg.trials) {
                    (true, _) => format!("refuted after {} instance(s)", c.searched),
                    (false, 0) => "skipped (no trials)".to_string(),
                    (false, _) => format!("NOT refuted in {} instance(s)", c.searched),
                };
                eprintln!("control {:26} {status}", c.name);
            }
            let mut repro = Vec::new();
            for t in r.theorems.iter().filter(|t| !t.ok()) {
                let v = t.first_violation.as_ref().expect("violations keep the first instance");
                fs::create_dir_all(repro_dir).map_err(|e| io_failure(repro_dir, e))?;
                let path = repro_dir.join(format!("phasekit-repro-{}-seed{}-trial{}.json", t.name, v.seed, v.trial));
                let body = json!({
                    "theorem": t.name,
                    "config": to_value(&cfg),
                    "violation": to_value(v),
                });
                let text = serde_json::to_string_pretty(&body).expect("reproducer serializes");
                fs::write(&path, text + "\n").map_err(|e| io_failure(&path, e))?;
                eprintln!("violation of {} written to {}", t.name, path.display());
                repro.push(path.display().to_string());
            }
            let cfg_json = serde_json::to_vec(&cfg).expect("config serializes");
            let mut out = to_value(&r);
            out["reproducers"] = json!(repro);
            let report = ctx.report(
                "verify",
                digest(&[&cfg_json]),
                Some(cfg.seed),
                &[("suite", cfg.tol)],
                out,
                &[("passed", r.passed)],
            );
            Ok((report, if r.passed { EXIT_OK } else { EXIT_VIOLATION }))
        }
        Command::Generate {
            kind,
            n,
            lo,
            hi,
            seed,
            out,
        } => {
            let mut rng = random::rng(seed.seed);
            let n = *n;
            if n == 0 {
                return Err(Error::InvalidArgument("n must be positive".into()).into());
            }
            let sectorial_range = || -> Result<(), Failure> {
                if !(hi >= lo && hi - lo < std::f64::consts::PI) {
                    return Err(Error::InvalidArgument(format!("need lo <= hi < lo + pi, got [{lo}, {hi}]")).into());
                }
                Ok(())
            };
            let mut truth = Value::Null;
            match kind {
                GenerateKind::Partial => {
                    sectorial_range()?;
                    let s = random::sectorial(&mut rng, n, *lo, *hi);
                    let partial = BandedPartial::from_matrix(&s.matrix, &vec![1; n], 1, *lo, *hi)?;
                    let text = serde_json::to_string_pretty(&partial).expect("partial serializes");
                    fs::write(out, text + "\n").map_err(|e| io_failure(out, e))?;
                }
                _ => {
                    let m = match kind {
                        GenerateKind::Sectorial => {
                            sectorial_range()?;
                            let s = random::sectorial(&mut rng, n, *lo, *hi);
                            truth = json!(s.phases);
                            s.matrix
                        }
                        GenerateKind::RealSectorial => {
                            if !(*hi > 0.02 && *hi < std::f64::consts::FRAC_PI_2) {
                                return Err(Error::InvalidArgument(format!(
                                    "real-sectorial uses hi as the largest block angle in (0.02, pi/2), got {hi}"
                                ))
                                .into());
                            }
                            let s = random::real_sectorial(&mut rng, n, *hi);
                            truth = json!(s.phases);
                            s.matrix
                        }
                        GenerateKind::Pd => random::hermitian_pd(&mut rng, n),
                        _ => random::complex_gaussian(&mut rng, n, n),
                    };
                    ctx.write(out, &m)?;
                }
            }
            eprintln!("wrote {}", out.display());
            let dg = digest(&[format!("{kind:?} {n} {lo} {hi}").as_bytes()]);
            let output = json!({ "kind": format!("{kind:?}").to_lowercase(), "file": out.display().to_string(), "phases": truth });
            Ok((ctx.report("generate", dg, Some(seed.seed), &[], output, &[]), EXIT_OK))
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let ctx = Ctx {
        degrees: cli.degrees,
        timings: cli.timings,
        format: if cli.hexfloat { FloatFormat::Hex } else { FloatFormat::Decimal },
        started: Instant::now(),
    };
    match dispatch(&cli, &ctx) {
        Ok((report, code)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
