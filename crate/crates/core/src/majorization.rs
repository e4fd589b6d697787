//! Majorization, weak majorization and log-majorization of real vectors.
//!
//! `x` is majorized by `y` when every prefix sum of `x` sorted descending is
//! at most the matching prefix sum of `y`, with equal totals. The weak
//! variant drops the total equality; the log variant compares prefix
//! products of positive vectors and is evaluated on logarithms.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance for phase vectors (radians).
pub const DEFAULT_PHASE_TOL: f64 = 1e-8;
/// Relative tolerance for singular-value vectors.
pub const DEFAULT_LOG_TOL: f64 = 1e-8;
/// Entries at or below this are not positive for log-majorization.
pub const POSITIVITY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MajorizationKind {
    Strong,
    Weak,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub holds: bool,
    pub kind: MajorizationKind,
    /// Prefix sums of `x` sorted descending (sums of logs for `Log`).
    pub partial_sums_lhs: Vec<f64>,
    pub partial_sums_rhs: Vec<f64>,
    /// Prefix length `k` (1-based) of the first failed inequality; `n`
    /// when only the total equality fails.
    pub first_violation_index: Option<usize>,
    /// Smallest margin over all prefix inequalities (and `-|total gap|`
    /// for the strong and log kinds). Negative means violated.
    pub slack: f64,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn check_inputs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn kernel(x: &[f64], y: &[f64], tol: f64, kind: MajorizationKind) -> MajorizationReport {
    let lhs = prefix_sums(&sorted_desc(x));
    let rhs = prefix_sums(&sorted_desc(y));
    let n = lhs.len();
    let equality = kind != MajorizationKind::Weak;
    let last_inequality = if equality { n.saturating_sub(1) } else { n };

    let mut slack = f64::INFINITY;
    let mut first = None;
    for k in 0..last_inequality {
        let margin = rhs[k] - lhs[k];
        slack = slack.min(margin);
        if margin < -tol && first.is_none() {
            first = Some(k + 1);
        }
    }
    if equality && n > 0 {
        let gap = (lhs[n - 1] - rhs[n - 1]).abs();
        slack = slack.min(-gap);
        if gap > tol && first.is_none() {
            first = Some(n);
        }
    }
    if n == 0 {
        slack = 0.0;
    }
    MajorizationReport {
        holds: first.is_none(),
        kind,
        partial_sums_lhs: lhs,
        partial_sums_rhs: rhs,
        first_violation_index: first,
        slack,
    }
}

/// `x` majorized by `y` within absolute `tol`.
pub fn is_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    check_inputs(x, y)?;
    Ok(kernel(x, y, tol, MajorizationKind::Strong))
}

/// `x` weakly majorized by `y` (from below) within absolute `tol`.
pub fn is_weakly_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    check_inputs(x, y)?;
    Ok(kernel(x, y, tol, MajorizationKind::Weak))
}

/// `x` log-majorized by `y`; `tol` is relative on the prefix products.
pub fn is_log_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    check_inputs(x, y)?;
    for (i, &v) in x.iter().chain(y).enumerate() {
        if v <= POSITIVITY_FLOOR {
            return Err(Error::NonPositiveEntry {
                index: i % x.len().max(1),
                value: v,
            });
        }
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(kernel(&lx, &ly, tol.ln_1p(), MajorizationKind::Log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflexive_with_zero_slack() {
        let r = is_majorized(&[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0], 0.0).unwrap();
        assert!(r.holds);
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn textbook_pair_and_converse() {
        assert!(is_majorized(&[1.0, 1.0], &[2.0, 0.0], 0.0).unwrap().holds);
        let r = is_majorized(&[2.0, 0.0], &[1.0, 1.0], 0.0).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_violation_index, Some(1));
        assert_eq!(r.slack, -1.0);
    }

    #[test]
    fn weak_relaxes_total() {
        assert!(is_weakly_majorized(&[0.0, 0.0], &[1.0, 0.0], 0.0).unwrap().holds);
        assert!(!is_majorized(&[0.0, 0.0], &[1.0, 0.0], 0.0).unwrap().holds);
        assert!(is_weakly_majorized(&[1.0, 1.0], &[2.0, 0.0], 0.0).unwrap().holds);
    }

    #[test]
    fn total_mismatch_reports_last_index() {
        let r = is_majorized(&[1.0, 0.0], &[1.0, 0.5], 1e-9).unwrap();
        assert_eq!(r.first_violation_index, Some(2));
    }

    #[test]
    fn log_majorization() {
        assert!(is_log_majorized(&[2.0, 2.0], &[4.0, 1.0], 1e-12).unwrap().holds);
        assert!(is_log_majorized(&[0.5, 3.0], &[3.0, 0.5], 0.0).unwrap().holds);
        assert!(!is_log_majorized(&[4.0, 1.0], &[2.0, 2.0], 1e-12).unwrap().holds);
        assert!(matches!(
            is_log_majorized(&[1.0, 0.0], &[1.0, 1.0], 0.0),
            Err(Error::NonPositiveEntry { index: 1, .. })
        ));
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(is_majorized(&[1.0], &[1.0, 2.0], 0.0).unwrap_err(), Error::LengthMismatch(1, 2));
    }

    #[test]
    fn empty_vectors_hold() {
        assert!(is_majorized(&[], &[], 0.0).unwrap().holds);
    }
}
