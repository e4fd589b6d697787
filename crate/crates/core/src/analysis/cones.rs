//! Phase cones `C[a, b]`, `C_k[a]`, the magnitude ball `B[g]`, and the
//! rank-robustness margins of `I + AB`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_min_eigval, inverse, singular_values, svd};
use crate::matrix::{c64, cis, ComplexMatrix};
use crate::numrange::classify_sector;
use crate::phase::{phases, sectorial_decomposition, PhaseVector};
use crate::random::{self, complex_gaussian, congruence_factor, uniform};

/// Rank decision thresholds on singular values of `I + AB`.
pub const RANK_DROP_TOL: f64 = 1e-8;
pub const RANK_KEEP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeSpec {
    /// Sectorial with `alpha <= phi_n` and `phi_1 <= beta`.
    Sector { alpha: f64, beta: f64 },
    /// Sectorial with `sum of top k phases <= alpha` and
    /// `sum of bottom k phases >= -alpha`.
    Compound { k: usize, alpha: f64 },
    /// `sigma_1 <= gamma`.
    Ball { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeMembership {
    pub member: bool,
    /// Smallest margin of the defining inequalities; negative outside.
    pub slack: f64,
    /// Strictly sectorial. Boundary members of `C[a, b]` certified through
    /// the rotated Hermitian parts have `strict == false`.
    pub strict: bool,
}

/// Smallest eigenvalues of `Herm(e^{-i t} C)` for `t = beta - pi/2`,
/// `alpha + pi/2` and the midpoint `(alpha + beta)/2`. All three are
/// nonnegative exactly when `W(C)` lies in the closed sector `[alpha, beta]`
/// (for `beta - alpha < pi`).
pub fn rotated_certificate(c: &ComplexMatrix, alpha: f64, beta: f64) -> Result<[f64; 3]> {
    c.ensure_square()?;
    let lam = |t: f64| -> Result<f64> {
        let m = c.scale(cis(-t)).hermitian_part();
        hermitian_min_eigval(&m)
    };
    Ok([lam(beta - FRAC_PI_2)?, lam(alpha + FRAC_PI_2)?, lam(0.5 * (alpha + beta))?])
}

/// Phases shifted by a multiple of `2 pi` so that the smallest is at least
/// `lo`, taking the smallest such shift.
fn lift_above(p: &PhaseVector, lo: f64) -> Vec<f64> {
    let m = ((lo - p.min()) / TAU).ceil();
    p.phases.iter().map(|x| x + m * TAU).collect()
}

pub fn cone_membership(c: &ComplexMatrix, spec: &ConeSpec, tol: f64) -> Result<ConeMembership> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    match *spec {
        ConeSpec::Ball { gamma } => {
            let s = singular_values(c).first().copied().unwrap_or(0.0);
            Ok(ConeMembership {
                member: s <= gamma + tol,
                slack: gamma - s,
                strict: s < gamma,
            })
        }
        ConeSpec::Sector { alpha, beta } => {
            let width = beta - alpha;
            if !(0.0..TAU).contains(&width) {
                return Err(Error::DegenerateCone { width });
            }
            if n == 0 || c.max_abs() == 0.0 {
                return Ok(ConeMembership {
                    member: width < PI,
                    slack: 0.0,
                    strict: false,
                });
            }
            let info = classify_sector(c)?;
            if info.sectorial {
                let p = phases(c, None)?;
                let lifted = lift_above(&p, alpha - tol);
                let slack = (beta - lifted[0]).min(lifted[n - 1] - alpha);
                return Ok(ConeMembership {
                    member: slack >= -tol,
                    slack,
                    strict: true,
                });
            }
            if width >= PI {
                return Ok(ConeMembership {
                    member: false,
                    slack: info.accretivity,
                    strict: false,
                });
            }
            let cert = rotated_certificate(c, alpha, beta)?;
            let scale = singular_values(c)[0];
            let slack = cert.iter().copied().fold(f64::INFINITY, f64::min) / scale;
            Ok(ConeMembership {
                member: slack >= -tol,
                slack,
                strict: false,
            })
        }
        ConeSpec::Compound { k, alpha } => {
            if k == 0 || k > n {
                return Err(Error::BadOrder { k, max: n });
            }
            let info = classify_sector(c)?;
            if !info.sectorial {
                return Ok(ConeMembership {
                    member: false,
                    slack: info.accretivity,
                    strict: false,
                });
            }
            let p = phases(c, None)?.phases;
            let top: f64 = p[..k].iter().sum();
            let bottom: f64 = p[n - k..].iter().sum();
            let slack = (alpha - top).min(bottom + alpha);
            Ok(ConeMembership {
                member: slack >= -tol,
                slack,
                strict: true,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingSide {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginReport {
    pub k: usize,
    /// `min(k pi - sum_{i<=k} phi_i, k pi + sum_{i>n-k} phi_i)`.
    pub phase_margin_alpha: f64,
    /// `1 / sigma_k(A)`.
    pub magnitude_margin_gamma: f64,
    pub binding_side: BindingSide,
    pub phases: PhaseVector,
}

/// Phases of `A` on a branch inside `(-pi, pi)`.
pub fn phases_in_principal_range(a: &ComplexMatrix) -> Result<PhaseVector> {
    let p = phases(a, None)?;
    for shift in [0.0, -TAU, TAU] {
        if p.min() + shift > -PI && p.max() + shift < PI {
            return Ok(PhaseVector {
                phases: p.phases.iter().map(|x| x + shift).collect(),
                theta: p.theta + shift,
            });
        }
    }
    Err(Error::PhasesOutOfRange { min: p.min(), max: p.max() })
}

pub fn rank_margin(a: &ComplexMatrix, k: usize) -> Result<MarginReport> {
    let n = a.ensure_square()?;
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    let p = phases_in_principal_range(a)?;
    let kf = k as f64;
    let upper = kf * PI - p.phases[..k].iter().sum::<f64>();
    let lower = kf * PI + p.phases[n - k..].iter().sum::<f64>();
    let sigma = singular_values(a);
    Ok(MarginReport {
        k,
        phase_margin_alpha: upper.min(lower),
        magnitude_margin_gamma: 1.0 / sigma[k - 1],
        binding_side: if upper <= lower { BindingSide::Upper } else { BindingSide::Lower },
        phases: p,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversarialB {
    pub b: ComplexMatrix,
    pub k: usize,
    /// Smallest `alpha` with `B in C_k[alpha]`; equals the phase margin.
    pub alpha_required: f64,
    pub binding_side: BindingSide,
    /// `B` is strictly sectorial (false when its phases span exactly `pi`,
    /// e.g. for `A = I`).
    pub sectorial: bool,
}

/// `B = T^{-1} E T^{-*}` with `E` diagonal unitary chosen so that `k`
/// diagonal entries of `D E` equal `-1` on the binding side, where
/// `A = T* D T`. Then `I + AB = T*(I + DE)T^{-*}` has rank exactly `n - k`.
pub fn adversarial_b(a: &ComplexMatrix, k: usize) -> Result<AdversarialB> {
    let n = a.ensure_square()?;
    let margin = rank_margin(a, k)?;
    let dec = sectorial_decomposition(a)?;
    let p = &margin.phases.phases;
    let mut e = vec![c64::new(1.0, 0.0); n];
    let (range, target) = match margin.binding_side {
        BindingSide::Upper => (0..k, PI),
        BindingSide::Lower => (n - k..n, -PI),
    };
    for i in range {
        e[i] = cis(target - p[i]);
    }
    let t_inv = inverse(&dec.t)?;
    let b = ComplexMatrix::from_diag(&e).congruence(&t_inv.adjoint());
    let angles: Vec<f64> = e.iter().map(|z| z.arg()).collect();
    let spread = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - angles.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(AdversarialB {
        b,
        k,
        alpha_required: margin.phase_margin_alpha,
        binding_side: margin.binding_side,
        sectorial: spread < PI - 1e-12,
    })
}

/// As [`adversarial_b`], for a caller-chosen `alpha` in
/// `[alpha_required, k pi)`.
pub fn adversarial_b_at(a: &ComplexMatrix, k: usize, alpha: f64) -> Result<AdversarialB> {
    let adv = adversarial_b(a, k)?;
    let limit = k as f64 * PI;
    if alpha < adv.alpha_required || alpha >= limit {
        return Err(Error::InfeasibleAlpha {
            alpha,
            required: adv.alpha_required,
            limit,
        });
    }
    Ok(adv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankVerdict {
    Drop,
    Keep,
    Indeterminate,
}

/// Classify `sigma` (one singular value of `I + AB`) with the drop/keep
/// thresholds, relative to `1 + sigma_1`.
pub fn rank_verdict(sigma: f64, sigma1: f64) -> RankVerdict {
    let scale = 1.0 + sigma1;
    if sigma < RANK_DROP_TOL * scale {
        RankVerdict::Drop
    } else if sigma > RANK_KEEP_TOL * scale {
        RankVerdict::Keep
    } else {
        RankVerdict::Indeterminate
    }
}

/// Singular values of `I + AB`, descending.
pub fn i_plus_ab_singular_values(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    singular_values(&(&ComplexMatrix::identity(n) + &(a * b)))
}

/// Random `B` in `C_k[alpha]`: congruence of a diagonal unitary whose
/// phases lie in a random window of width below `pi`, shrunk toward zero
/// until both `k`-sums satisfy the bound.
pub fn sample_compound_cone(rng: &mut impl Rng, n: usize, k: usize, alpha: f64) -> ComplexMatrix {
    let width = uniform(rng, 0.05, PI - 0.05);
    let center = uniform(rng, -PI / 2.0, PI / 2.0);
    let mut p: Vec<f64> = (0..n)
        .map(|_| center + uniform(rng, -0.5 * width, 0.5 * width))
        .collect();
    p.sort_by(|a, b| b.total_cmp(a));
    let top: f64 = p[..k].iter().sum();
    let bottom: f64 = p[n - k..].iter().sum();
    let mut s: f64 = 1.0;
    if top > alpha {
        s = s.min(alpha.max(0.0) / top);
    }
    if bottom < -alpha {
        s = s.min(alpha.max(0.0) / -bottom);
    }
    let s = s * uniform(rng, 0.5, 1.0);
    let p: Vec<f64> = p.iter().map(|x| x * s).collect();
    ComplexMatrix::from_phases(&p).congruence(&congruence_factor(rng, n))
}

/// Random `B` with `sigma_1(B) <= gamma`.
pub fn sample_ball(rng: &mut impl Rng, n: usize, gamma: f64) -> ComplexMatrix {
    let g = complex_gaussian(rng, n, n);
    let s = singular_values(&g)[0];
    g.scale_real(gamma * uniform(rng, 0.05, 1.0) / s)
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedMarginReport {
    pub gamma: f64,
    pub alpha: f64,
    /// `1 / sigma_1(A)`.
    pub gamma_limit: f64,
    /// `min(pi - phi_1, pi + phi_n)`.
    pub alpha_limit: f64,
    /// `gamma < gamma_limit && alpha < alpha_limit`.
    pub verdict: bool,
    pub trials: usize,
    /// Sampled `B` with `rank(I + AB) < n` (expected zero when the verdict
    /// holds).
    pub violations: usize,
    /// Smallest `sigma_n(I + AB)` seen over the samples.
    pub min_sigma: f64,
    /// A rank-dropping `B` inside the set, when the verdict fails.
    pub counterexample: Option<ComplexMatrix>,
}

/// `B = -v u* / sigma_1` from the top singular pair of `A`, so that
/// `I + AB = I - u u*` is singular and `sigma_1(B) = 1/sigma_1(A)`.
pub fn top_singular_breaker(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    let d = svd(a);
    let s1 = d.s.first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let u = d.u.column(0);
    let v = d.v.column(0);
    Ok(ComplexMatrix::from_fn(n, n, |i, j| -v[i] * u[j].conj() / s1))
}

/// `B = -V_k U_k* / sigma_k`-style breaker: `I + AB` loses rank `k` with
/// `sigma_1(B) = 1/sigma_k(A)`.
pub fn magnitude_breaker(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    let d = svd(a);
    let mut b = ComplexMatrix::zeros(n, n);
    for m in 0..k {
        let s = d.s[m];
        if s == 0.0 {
            return Err(Error::Singular);
        }
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] -= d.v[(i, m)] * d.u[(j, m)].conj() / s;
            }
        }
    }
    Ok(b)
}

pub fn mixed_margin_check(
    a: &ComplexMatrix,
    gamma: f64,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<MixedMarginReport> {
    let n = a.ensure_square()?;
    let p = phases_in_principal_range(a)?;
    let gamma_limit = 1.0 / singular_values(a)[0];
    let alpha_limit = (PI - p.max()).min(PI + p.min());
    let verdict = gamma < gamma_limit && alpha < alpha_limit;
    let mut report = MixedMarginReport {
        gamma,
        alpha,
        gamma_limit,
        alpha_limit,
        verdict,
        trials,
        violations: 0,
        min_sigma: f64::INFINITY,
        counterexample: None,
    };
    if !verdict {
        let b = if gamma >= gamma_limit {
            top_singular_breaker(a)?
        } else {
            adversarial_b(a, 1)?.b
        };
        report.counterexample = Some(b);
    }
    for trial in 0..trials {
        let mut rng = random::trial_rng(seed, trial as u64);
        let b = if trial % 2 == 0 {
            sample_ball(&mut rng, n, gamma)
        } else {
            sample_compound_cone(&mut rng, n, 1, alpha)
        };
        let s = i_plus_ab_singular_values(a, &b);
        let last = s[n - 1];
        report.min_sigma = report.min_sigma.min(last);
        if rank_verdict(last, s[0]) == RankVerdict::Drop {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_memberships() {
        let pd = ComplexMatrix::from_real(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let sec = ConeSpec::Sector { alpha: 0.0, beta: 0.0 };
        assert!(cone_membership(&pd, &sec, 1e-9).unwrap().member);
        let i = ComplexMatrix::identity(3);
        for k in 1..=3 {
            assert!(cone_membership(&i, &ConeSpec::Compound { k, alpha: 0.0 }, 1e-9).unwrap().member);
        }
        let c = ComplexMatrix::from_phases(&[0.5, -0.2]);
        assert!(!cone_membership(&c, &ConeSpec::Sector { alpha: -0.1, beta: 0.6 }, 1e-9).unwrap().member);
        assert!(cone_membership(&c, &ConeSpec::Sector { alpha: -0.2, beta: 0.5 }, 1e-9).unwrap().member);
        assert!(cone_membership(&i, &ConeSpec::Ball { gamma: 1.0 }, 1e-12).unwrap().member);
        assert!(matches!(
            cone_membership(&c, &ConeSpec::Sector { alpha: 1.0, beta: 0.0 }, 0.0),
            Err(Error::DegenerateCone { .. })
        ));
    }

    #[test]
    fn boundary_member_is_not_strict() {
        // W = segment [0, 1] on the real axis: 0 on the boundary
        let c = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let m = cone_membership(&c, &ConeSpec::Sector { alpha: 0.0, beta: 0.0 }, 1e-12).unwrap();
        assert!(m.member && !m.strict);
        let c = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(!cone_membership(&c, &ConeSpec::Sector { alpha: 0.0, beta: 0.0 }, 1e-12).unwrap().member);
    }

    #[test]
    fn margins_of_simple_matrices() {
        let m = rank_margin(&ComplexMatrix::identity(3), 1).unwrap();
        assert!((m.phase_margin_alpha - PI).abs() < 1e-12);
        assert!((m.magnitude_margin_gamma - 1.0).abs() < 1e-12);
        let a = ComplexMatrix::from_phases(&[PI / 3.0, -PI / 4.0]);
        let m = rank_margin(&a, 1).unwrap();
        assert!((m.phase_margin_alpha - 2.0 * PI / 3.0).abs() < 1e-10);
        assert_eq!(m.binding_side, BindingSide::Upper);
    }

    #[test]
    fn adversary_for_identity() {
        let adv = adversarial_b(&ComplexMatrix::identity(3), 1).unwrap();
        let want = ComplexMatrix::from_real_diag(&[-1.0, 1.0, 1.0]);
        assert!((&adv.b - &want).norm_fro() < 1e-12);
        assert!(!adv.sectorial);
        assert!(matches!(
            adversarial_b_at(&ComplexMatrix::identity(3), 1, 1.0),
            Err(Error::InfeasibleAlpha { .. })
        ));
    }

    #[test]
    fn adversary_full_drop() {
        let phi = 0.4;
        let a = ComplexMatrix::identity(3).scale(cis(phi));
        let adv = adversarial_b(&a, 3).unwrap();
        let s = i_plus_ab_singular_values(&a, &adv.b);
        assert!(s[0] < 1e-12);
    }

    #[test]
    fn mixed_margin_identity() {
        let i = ComplexMatrix::identity(2);
        assert!(mixed_margin_check(&i, 0.9, 3.0, 0, 1).unwrap().verdict);
        assert!(!mixed_margin_check(&i, 1.0, 3.0, 0, 1).unwrap().verdict);
        assert!(!mixed_margin_check(&i, 0.5, PI, 0, 1).unwrap().verdict);
        let r = mixed_margin_check(&i, 1.0, 1.0, 0, 1).unwrap();
        let b = r.counterexample.unwrap();
        let s = i_plus_ab_singular_values(&i, &b);
        assert!(s[1] < 1e-12);
    }
}
