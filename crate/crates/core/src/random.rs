//! Seeded generators for the property suites.
//!
//! Sectorial test matrices are built as `P* diag(e^{i phi}) P` with
//! `P = I + 0.5 G`, so sectoriality and the phases are known by
//! construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::qr_thin;
use crate::matrix::{c64, cis, ComplexMatrix, ONE};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` of a seeded run. Streams do not
/// depend on how trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> TestRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian entries, `E|z|^2 = 1`.
pub fn complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| c64::new(gaussian(rng) * s, gaussian(rng) * s))
}

pub fn real_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c64::new(gaussian(rng), 0.0))
}

/// Haar-distributed unitary via QR of a complex Gaussian draw.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    qr_thin(&complex_gaussian(rng, n, n)).q
}

/// Isometry with `k` orthonormal columns.
pub fn isometry(rng: &mut impl Rng, n: usize, k: usize) -> ComplexMatrix {
    qr_thin(&complex_gaussian(rng, n, k)).q
}

/// `I + 0.5 G`: nonsingular with probability one and moderately conditioned.
pub fn congruence_factor(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = complex_gaussian(rng, n, n).scale_real(0.5);
    &ComplexMatrix::identity(n) + &g
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

#[derive(Debug, Clone)]
pub struct SectorialSample {
    pub matrix: ComplexMatrix,
    /// Ground-truth phases, descending.
    pub phases: Vec<f64>,
}

/// `P* diag(e^{i phi}) P` for the given phases.
pub fn sectorial_with_phases(rng: &mut impl Rng, phases: &[f64]) -> ComplexMatrix {
    let p = congruence_factor(rng, phases.len());
    ComplexMatrix::from_phases(phases).congruence(&p)
}

/// Sectorial matrix with phases uniform in `[lo, hi]` (requires `hi - lo < pi`).
pub fn sectorial(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> SectorialSample {
    debug_assert!(hi - lo < std::f64::consts::PI);
    let mut phases: Vec<f64> = (0..n).map(|_| uniform(rng, lo, hi)).collect();
    phases.sort_by(|a, b| b.total_cmp(a));
    SectorialSample {
        matrix: sectorial_with_phases(rng, &phases),
        phases,
    }
}

/// Sectorial matrix whose phase window has random center and width below
/// `max_width`, inside `[-limit, limit]`.
pub fn sectorial_in_window(rng: &mut impl Rng, n: usize, limit: f64, max_width: f64) -> SectorialSample {
    let width = uniform(rng, 0.05 * max_width, max_width).min(2.0 * limit);
    let center = uniform(rng, -limit + width / 2.0, limit - width / 2.0);
    sectorial(rng, n, center - width / 2.0, center + width / 2.0)
}

/// Hermitian positive definite `P* P` with `P = I + 0.5 G`.
pub fn hermitian_pd(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let p = congruence_factor(rng, n);
    p.adjoint_mul(&p).hermitian_part()
}

/// Hermitian positive definite `I + s G` with `|s G|_2 = size < 1`.
pub fn near_identity_pd(rng: &mut impl Rng, n: usize, size: f64) -> ComplexMatrix {
    let g = complex_gaussian(rng, n, n).hermitian_part();
    let s = crate::linalg::singular_values(&g)[0].max(1e-300);
    &ComplexMatrix::identity(n) + &g.scale_real(size / s)
}

/// Real sectorial matrix `P^T D P` with `D` block-diagonal rotations by
/// angles in `(0, max_angle)`; phases are `+-angle` pairs plus a zero for
/// odd `n`.
pub fn real_sectorial(rng: &mut impl Rng, n: usize, max_angle: f64) -> SectorialSample {
    let mut d = ComplexMatrix::zeros(n, n);
    let mut phases = Vec::with_capacity(n);
    let mut i = 0;
    while i + 1 < n {
        let w = uniform(rng, 0.02, max_angle);
        let (c, s) = (w.cos(), w.sin());
        d[(i, i)] = c64::new(c, 0.0);
        d[(i, i + 1)] = c64::new(-s, 0.0);
        d[(i + 1, i)] = c64::new(s, 0.0);
        d[(i + 1, i + 1)] = c64::new(c, 0.0);
        phases.extend([w, -w]);
        i += 2;
    }
    if i < n {
        d[(i, i)] = ONE;
        phases.push(0.0);
    }
    phases.sort_by(|a, b| b.total_cmp(a));
    let g = real_gaussian(rng, n, n).scale_real(0.5);
    let p = &ComplexMatrix::identity(n) + &g;
    SectorialSample {
        matrix: d.congruence(&p),
        phases,
    }
}

/// Random unit vector.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<c64> {
    let v = complex_gaussian(rng, n, 1).into_vec();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / nrm).collect()
}

/// Unit-modulus scalar `e^{i t}` with `t` uniform on `[-pi, pi)`.
pub fn unit_phase(rng: &mut impl Rng) -> c64 {
    cis(uniform(rng, -std::f64::consts::PI, std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = complex_gaussian(&mut trial_rng(7, 3), 2, 2);
        let b = complex_gaussian(&mut trial_rng(7, 3), 2, 2);
        let c = complex_gaussian(&mut trial_rng(7, 4), 2, 2);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut rng(1), 5);
        assert!((&u.adjoint_mul(&u) - &ComplexMatrix::identity(5)).norm_fro() < 1e-13);
    }

    #[test]
    fn real_sectorial_is_real() {
        let s = real_sectorial(&mut rng(2), 5, 1.2);
        assert!(s.matrix.is_real(0.0));
        assert_eq!(s.phases.len(), 5);
    }
}
