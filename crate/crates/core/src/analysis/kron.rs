use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::phase::{phases, PhaseVector};

#[derive(Debug, Clone, Serialize)]
pub struct KroneckerReport {
    /// `phi_i(A) + phi_j(B)` over all pairs, descending.
    pub formula: Vec<f64>,
    /// Phases of `A (x) B` computed directly, on the formula's branch.
    pub direct: PhaseVector,
    pub max_deviation: f64,
}

fn spread_condition(pa: &PhaseVector, pb: &PhaseVector) -> Result<()> {
    let spread = pa.spread() + pb.spread();
    if spread >= PI {
        return Err(Error::SpreadTooWide { spread });
    }
    Ok(())
}

fn centered_theta(hi: f64, lo: f64) -> f64 {
    0.5 * (hi + lo) - FRAC_PI_2
}

pub fn kronecker_phases(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<KroneckerReport> {
    let pa = phases(a, None)?;
    let pb = phases(b, None)?;
    spread_condition(&pa, &pb)?;
    let mut formula: Vec<f64> = pa
        .phases
        .iter()
        .flat_map(|x| pb.phases.iter().map(move |y| x + y))
        .collect();
    formula.sort_by(|x, y| y.total_cmp(x));
    let theta = centered_theta(formula[0], formula[formula.len() - 1]);
    let direct = phases(&a.kron(b), Some(theta))?;
    let max_deviation = formula
        .iter()
        .zip(&direct.phases)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(KroneckerReport {
        formula,
        direct,
        max_deviation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HadamardReport {
    pub phases: PhaseVector,
    /// `phi_1(A) + phi_1(B)`.
    pub upper_bound: f64,
    /// `phi_n(A) + phi_n(B)`.
    pub lower_bound: f64,
    pub holds: bool,
    /// `phi(A) + phi(B)`, both descending, for majorization comparisons.
    pub phase_sum: Vec<f64>,
}

/// Phases of `A o B` against the endpoint bounds.
pub fn hadamard_phase_bounds(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<HadamardReport> {
    let n = a.ensure_square()?;
    if b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("A is {n}x{n}, B is {:?}", b.shape())));
    }
    let pa = phases(a, None)?;
    let pb = phases(b, None)?;
    spread_condition(&pa, &pb)?;
    let upper_bound = pa.max() + pb.max();
    let lower_bound = pa.min() + pb.min();
    let p = phases(&a.hadamard(b), Some(centered_theta(upper_bound, lower_bound)))?;
    let holds = p.max() <= upper_bound + tol && p.min() >= lower_bound - tol;
    Ok(HadamardReport {
        phase_sum: pa.phases.iter().zip(&pb.phases).map(|(x, y)| x + y).collect(),
        phases: p,
        upper_bound,
        lower_bound,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c64, cis};

    #[test]
    fn identities() {
        let i = ComplexMatrix::identity(2);
        let r = kronecker_phases(&i, &i).unwrap();
        assert!(r.formula.iter().all(|x| x.abs() < 1e-14));
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn scalar_shift() {
        let a = ComplexMatrix::from_phases(&[PI / 6.0, -PI / 6.0]);
        let b = ComplexMatrix::from_diag(&[cis(PI / 8.0)]);
        let r = kronecker_phases(&a, &b).unwrap();
        assert!((r.formula[0] - (PI / 6.0 + PI / 8.0)).abs() < 1e-14);
        assert!((r.formula[1] - (-PI / 6.0 + PI / 8.0)).abs() < 1e-14);
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn too_wide() {
        let a = ComplexMatrix::from_phases(&[1.0, -1.0]);
        assert!(matches!(kronecker_phases(&a, &a), Err(Error::SpreadTooWide { .. })));
    }

    #[test]
    fn positive_definite_hadamard() {
        let a = ComplexMatrix::from_real(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let b = ComplexMatrix::from_fn(2, 2, |i, j| if i == j { c64::new(1.0, 0.0) } else { c64::new(0.3, 0.0) });
        let r = hadamard_phase_bounds(&a, &b, 1e-10).unwrap();
        assert!(r.holds);
        assert!(r.phases.phases.iter().all(|x| x.abs() < 1e-12));
    }
}
