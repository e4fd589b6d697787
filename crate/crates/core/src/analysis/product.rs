use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::general_eig;
use crate::majorization::{is_majorized, MajorizationReport};
use crate::matrix::{cis, ComplexMatrix};
use crate::phase::phases;

/// Eigenvalues closer than this (radians) to the branch cut are ambiguous.
pub const BRANCH_CUT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ProductReport {
    /// `arg eig(AB)` in `(theta_A + theta_B, theta_A + theta_B + 2 pi)`,
    /// descending.
    pub eigenangles: Vec<f64>,
    /// `phi(A) + phi(B)`, both sorted descending.
    pub phase_sum: Vec<f64>,
    pub majorization: MajorizationReport,
}

/// Angles of `values` in `(lo, lo + 2 pi)`, descending. Fails when one sits
/// within `BRANCH_CUT_TOL` of the cut.
pub fn branch_angles(values: &[crate::c64], lo: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    for (index, v) in values.iter().enumerate() {
        let a = (v * cis(-lo)).arg().rem_euclid(TAU);
        let distance = a.min(TAU - a);
        if distance < BRANCH_CUT_TOL {
            return Err(Error::BranchAmbiguity { index, distance });
        }
        out.push(lo + a);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Eigenvalue angles of `AB` against `phi(A) + phi(B)`.
pub fn product_phase_check(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<ProductReport> {
    let n = a.ensure_square()?;
    if b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("A is {n}x{n}, B is {:?}", b.shape())));
    }
    let pa = phases(a, None)?;
    let pb = phases(b, None)?;
    let lambda = general_eig(&(a * b))?.values;
    let eigenangles = branch_angles(&lambda, pa.theta + pb.theta)?;
    let phase_sum: Vec<f64> = pa.phases.iter().zip(&pb.phases).map(|(x, y)| x + y).collect();
    let majorization = is_majorized(&eigenangles, &phase_sum, tol)?;
    Ok(ProductReport {
        eigenangles,
        phase_sum,
        majorization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c64;

    #[test]
    fn identity_pair() {
        let i = ComplexMatrix::identity(3);
        let r = product_phase_check(&i, &i, 1e-8).unwrap();
        assert!(r.majorization.holds);
        assert!(r.eigenangles.iter().chain(&r.phase_sum).all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn commuting_diagonals_give_equality() {
        let a = ComplexMatrix::from_phases(&[0.5, -0.3, 0.1]);
        let b = ComplexMatrix::from_phases(&[0.2, 0.4, -0.6]);
        let r = product_phase_check(&a, &b, 1e-8).unwrap();
        assert!(r.majorization.holds);
        let mut want = [0.7_f64, 0.1, -0.5];
        want.sort_by(|x, y| y.total_cmp(x));
        assert!(r.eigenangles.iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn cut_detection() {
        let v = [c64::new(-1.0, 0.0)];
        assert!(matches!(branch_angles(&v, -std::f64::consts::PI), Err(Error::BranchAmbiguity { .. })));
        assert!(branch_angles(&v, 0.0).is_ok());
    }
}
