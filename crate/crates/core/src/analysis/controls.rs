//! Statements that look plausible but are false. Each search returns the
//! first instance that breaks the statement; a correct implementation must
//! be able to find one.

use serde::Serialize;

use crate::error::Result;
use crate::majorization::is_majorized;
use crate::matrix::{c64, ComplexMatrix};
use crate::numrange::classify_sector;
use crate::phase::{eigenphases, phases};
use crate::random;

/// A 4x4 sectorial matrix for which `phi(A o I)` and `phi(A) + phi(I)` are
/// not related by majorization.
pub fn hadamard_counterexample_matrix() -> ComplexMatrix {
    let z = |re: f64, im: f64| c64::new(re, im);
    ComplexMatrix::from_row_major(
        4,
        4,
        vec![
            z(3.0, -2.0),
            z(1.0, -2.0),
            z(1.0, 0.0),
            z(1.0, 1.0),
            z(1.0, -2.0),
            z(2.0, 0.0),
            z(0.0, -1.0),
            z(0.0, -1.0),
            z(1.0, 0.0),
            z(0.0, -1.0),
            z(1.0, 3.0),
            z(0.0, 3.0),
            z(1.0, 1.0),
            z(0.0, -1.0),
            z(0.0, 3.0),
            z(1.0, 4.0),
        ],
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub a: ComplexMatrix,
    pub b: Option<ComplexMatrix>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

/// Positive definite `A`, `B` with `AB` sectorial and `phi(AB)` not
/// majorized by `phi(A) + phi(B) = 0`.
pub fn find_product_phase_counterexample(seed: u64, max_trials: u64, n: usize) -> Result<Option<Counterexample>> {
    for trial in 0..max_trials {
        let mut rng = random::trial_rng(seed, trial);
        let a = random::near_identity_pd(&mut rng, n, 0.8);
        let b = random::near_identity_pd(&mut rng, n, 0.8);
        let ab = &a * &b;
        if !classify_sector(&ab)?.sectorial {
            continue;
        }
        let lhs = phases(&ab, None)?.phases;
        let rhs: Vec<f64> = phases(&a, None)?
            .phases
            .iter()
            .zip(&phases(&b, None)?.phases)
            .map(|(x, y)| x + y)
            .collect();
        if !is_majorized(&lhs, &rhs, 1e-8)?.holds {
            return Ok(Some(Counterexample {
                trial,
                a,
                b: Some(b),
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}

/// Sectorial `A` with `arg lambda_i(A) > phi_i(A)` for some `i` (the
/// entrywise bound fails although the majorization holds).
pub fn find_eigenphase_entrywise_counterexample(seed: u64, max_trials: u64, n: usize) -> Result<Option<Counterexample>> {
    for trial in 0..max_trials {
        let mut rng = random::trial_rng(seed, trial);
        let a = random::sectorial(&mut rng, n, -1.4, 1.4).matrix;
        let lhs = eigenphases(&a)?;
        let rhs = phases(&a, None)?.phases;
        if lhs.iter().zip(&rhs).any(|(l, r)| *l > r + 1e-6) {
            return Ok(Some(Counterexample {
                trial,
                a,
                b: None,
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}
