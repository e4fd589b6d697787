use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse, singular_values, DEFAULT_RANK_TOL};
use crate::matrix::ComplexMatrix;
use crate::phase::{phases, sectorial_decomposition, PhaseVector};

/// Default tolerance for interlacing and extremal-sum checks (radians).
pub const INTERLACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct InterlacingReport {
    pub matrix: ComplexMatrix,
    /// Phases of `matrix`, on the parent's branch.
    pub phases: PhaseVector,
    pub parent: PhaseVector,
    pub holds: bool,
    /// Smallest margin of `phi_j(C) >= phi_j(child) >= phi_{j+k}(C)`.
    pub worst_slack: f64,
}

/// Checks `parent[j] >= child[j] >= parent[j + k]` with `k = n - m`.
/// Returns `(holds, worst_slack)`.
pub fn interlaces(parent: &[f64], child: &[f64], tol: f64) -> (bool, f64) {
    let k = parent.len().saturating_sub(child.len());
    let mut worst = f64::INFINITY;
    for (j, c) in child.iter().enumerate() {
        worst = worst.min(parent[j] - c).min(c - parent[j + k]);
    }
    if child.is_empty() {
        worst = 0.0;
    }
    (worst >= -tol, worst)
}

fn child_report(parent: PhaseVector, matrix: ComplexMatrix, tol: f64) -> Result<InterlacingReport> {
    let child = phases(&matrix, Some(parent.theta))?;
    let (holds, worst_slack) = interlaces(&parent.phases, &child.phases, tol);
    Ok(InterlacingReport {
        matrix,
        phases: child,
        parent,
        holds,
        worst_slack,
    })
}

fn ensure_full_column_rank(x: &ComplexMatrix) -> Result<()> {
    let s = singular_values(x);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > DEFAULT_RANK_TOL * hi && x.rows() >= x.cols() => Ok(()),
        _ => Err(Error::RankDeficient),
    }
}

/// Phases of the compression `X* C X` and the interlacing verdict.
pub fn compress(c: &ComplexMatrix, x: &ComplexMatrix, tol: f64) -> Result<InterlacingReport> {
    let n = c.ensure_square()?;
    if x.rows() != n || x.cols() == 0 {
        return Err(Error::DimensionMismatch(format!("C is {n}x{n}, X is {:?}", x.shape())));
    }
    ensure_full_column_rank(x)?;
    let parent = phases(c, None)?;
    child_report(parent, c.congruence(x), tol)
}

/// `C/11 = C22 - C21 C11^{-1} C12` for the leading `k x k` block.
pub fn schur_complement_matrix(c: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = c.ensure_square()?;
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("block size {k} must lie in 1..{n}")));
    }
    let c11 = c.block(0, 0, k, k);
    let c12 = c.block(0, k, k, n - k);
    let c21 = c.block(k, 0, n - k, k);
    let c22 = c.block(k, k, n - k, n - k);
    Ok(&c22 - &(&(&c21 * &inverse(&c11)?) * &c12))
}

/// Schur complement of the leading `k x k` block, its phases and the
/// interlacing verdict.
pub fn schur_complement(c: &ComplexMatrix, k: usize, tol: f64) -> Result<InterlacingReport> {
    let parent = phases(c, None)?;
    child_report(parent, schur_complement_matrix(c, k)?, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalSums {
    pub k: usize,
    /// Sum of the `k` largest phases.
    pub max_sum: f64,
    /// Sum of the `k` smallest phases.
    pub min_sum: f64,
    /// `n x k` witness with `X* C X` having phases `phi_1..phi_k`.
    pub x_max: ComplexMatrix,
    /// Witness for the `k` smallest phases.
    pub x_min: ComplexMatrix,
    pub parent: PhaseVector,
}

/// Extreme values of the phase sum of `k`-dimensional compressions, with
/// witnesses built from the inverse of the congruence factor.
pub fn extremal_phase_sums(c: &ComplexMatrix, k: usize) -> Result<ExtremalSums> {
    let n = c.ensure_square()?;
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    let dec = sectorial_decomposition(c)?;
    let t_inv = inverse(&dec.t)?;
    let p = &dec.phases.phases;
    Ok(ExtremalSums {
        k,
        max_sum: p[..k].iter().sum(),
        min_sum: p[n - k..].iter().sum(),
        x_max: t_inv.block(0, 0, n, k),
        x_min: t_inv.block(0, n - k, n, k),
        parent: dec.phases,
    })
}

/// Sum of the phases of `X* C X` on the branch `(theta, theta + pi)`.
pub fn compression_phase_sum(c: &ComplexMatrix, x: &ComplexMatrix, theta: f64) -> Result<f64> {
    Ok(phases(&c.congruence(x), Some(theta))?.phases.iter().sum())
}
