//! Numerical range `W(C) = {x*Cx : |x| = 1}`: sectoriality, supporting rays,
//! boundary sampling and point membership.
//!
//! Everything here is driven by the support function
//! `f(g) = lambda_min(Herm(e^{-ig} C))`, which is positive exactly on the
//! open interval `(phi_1 - pi/2, phi_n + pi/2)` when `C` is sectorial.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hermitian_min_eigval, singular_values};
use crate::matrix::{c64, ComplexMatrix};

/// Coarse grid size for angle searches.
pub const GRID: usize = 720;
/// Angular resolution of the golden-section refinement.
pub const ANGLE_RES: f64 = 1e-12;
/// Default sectoriality threshold relative to the spectral norm.
pub const SECTOR_TOL_REL: f64 = 1e-9;
/// Default membership tolerance relative to `|C|_2 + |z|`.
pub const MEMBERSHIP_TOL_REL: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `x* C x`.
pub fn quadratic_form(c: &ComplexMatrix, x: &[c64]) -> c64 {
    c.mul_vec(x).iter().zip(x).map(|(cx, xi)| xi.conj() * cx).sum()
}

/// Cached `C = H + iK` split for repeated support evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Support {
    h: ComplexMatrix,
    k: ComplexMatrix,
}

impl Support {
    pub(crate) fn new(c: &ComplexMatrix) -> Self {
        Self {
            h: c.hermitian_part(),
            k: c.skew_part_over_i(),
        }
    }

    /// `Herm(e^{-ig} C) = cos g H + sin g K`.
    pub(crate) fn rotated(&self, g: f64) -> ComplexMatrix {
        let (s, c) = g.sin_cos();
        let data = self
            .h
            .as_slice()
            .iter()
            .zip(self.k.as_slice())
            .map(|(h, k)| h * c + k * s)
            .collect();
        ComplexMatrix::from_row_major(self.h.rows(), self.h.cols(), data)
    }

    pub(crate) fn value(&self, g: f64) -> Result<f64> {
        hermitian_min_eigval(&self.rotated(g))
    }
}

/// Smallest eigenvalue of `Herm(e^{-i gamma} C)` and a unit eigenvector.
pub fn support_value(c: &ComplexMatrix, gamma: f64) -> Result<(f64, Vec<c64>)> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let e = hermitian_eig(&Support::new(c).rotated(gamma))?;
    Ok((e.values[n - 1], e.vectors.column(n - 1)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorInfo {
    pub sectorial: bool,
    /// Canonical rotation in `(-pi, pi]`; NaN when not sectorial.
    pub gamma_star: f64,
    /// Largest phase (upper supporting ray); NaN when not sectorial.
    pub phi_max: f64,
    /// Smallest phase (lower supporting ray); NaN when not sectorial.
    pub phi_min: f64,
    /// `phi_max - phi_min`; NaN when not sectorial.
    pub field_angle: f64,
    /// `max_g lambda_min(Herm(e^{-ig} C))`.
    pub accretivity: f64,
}

/// Maximize `f` over the circle: grid sweep then golden-section refinement
/// around the best grid point. Returns `(angle, value)` with the angle in
/// `(-pi, pi]`.
pub(crate) fn maximize_on_circle(f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let step = TAU / GRID as f64;
    let mut best = (PI, f(PI)?);
    for j in 0..GRID - 1 {
        let g = -PI + (j + 1) as f64 * step;
        let v = f(g)?;
        if v > best.1 {
            best = (g, v);
        }
    }
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > ANGLE_RES {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        }
    }
    let (g, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let (g, v) = if v >= best.1 { (g, v) } else { best };
    Ok((wrap_angle(g), v))
}

/// Reduce to `(-pi, pi]`, snapping values within `1e-9` of `-pi` to `pi`.
pub fn wrap_angle(g: f64) -> f64 {
    let mut w = (g + PI).rem_euclid(TAU) - PI;
    if w <= -PI + 1e-9 {
        w += TAU;
    }
    w
}

/// Boundary of the positive set of `f` between `inside` (f > 0) and
/// `outside` (f <= 0).
fn bisect_crossing(f: &impl Fn(f64) -> Result<f64>, mut inside: f64, mut outside: f64) -> Result<f64> {
    for _ in 0..200 {
        if (outside - inside).abs() <= 1e-14 {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if f(mid)? > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// Sectoriality verdict with the default threshold `1e-9 |C|_2`.
pub fn classify_sector(c: &ComplexMatrix) -> Result<SectorInfo> {
    c.ensure_square()?;
    c.ensure_finite()?;
    let norm2 = singular_values(c).first().copied().unwrap_or(0.0);
    classify_sector_with(c, SECTOR_TOL_REL * norm2)
}

/// Sectoriality verdict with an absolute accretivity threshold.
pub fn classify_sector_with(c: &ComplexMatrix, sector_tol: f64) -> Result<SectorInfo> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    if n == 0 || c.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let s = Support::new(c);
    let f = |g: f64| s.value(g);
    let (gamma_star, accretivity) = maximize_on_circle(f)?;
    if accretivity <= sector_tol {
        return Ok(SectorInfo {
            sectorial: false,
            gamma_star: f64::NAN,
            phi_max: f64::NAN,
            phi_min: f64::NAN,
            field_angle: f64::NAN,
            accretivity,
        });
    }
    let upper = bisect_crossing(&f, gamma_star, gamma_star + PI)?;
    let lower = bisect_crossing(&f, gamma_star, gamma_star - PI)?;
    let phi_max = lower + PI / 2.0;
    let phi_min = upper - PI / 2.0;
    Ok(SectorInfo {
        sectorial: true,
        gamma_star,
        phi_max,
        phi_min,
        field_angle: phi_max - phi_min,
        accretivity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub points: Vec<c64>,
    pub angles: Vec<f64>,
    /// Unit vectors with `points[j] = x_j* C x_j`.
    #[serde(skip)]
    pub witnesses: Vec<Vec<c64>>,
}

/// Boundary points of `W(C)` from the top eigenvectors of
/// `Herm(e^{-ig} C)` on a uniform grid of `[0, 2 pi)`.
pub fn boundary_trace(c: &ComplexMatrix, n_samples: usize) -> Result<BoundaryTrace> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    if n_samples < 8 {
        return Err(Error::InvalidArgument(format!("n_samples must be at least 8, got {n_samples}")));
    }
    let s = Support::new(c);
    let mut trace = BoundaryTrace {
        points: Vec::with_capacity(n_samples),
        angles: Vec::with_capacity(n_samples),
        witnesses: Vec::with_capacity(n_samples),
    };
    if n == 0 {
        return Ok(trace);
    }
    for j in 0..n_samples {
        let g = TAU * j as f64 / n_samples as f64;
        let x = hermitian_eig(&s.rotated(g))?.vectors.column(0);
        trace.points.push(quadratic_form(c, &x));
        trace.angles.push(g);
        trace.witnesses.push(x);
    }
    Ok(trace)
}

/// Membership `z in W(C)` with the default relative tolerance.
pub fn contains_point(c: &ComplexMatrix, z: c64) -> Result<bool> {
    c.ensure_square()?;
    c.ensure_finite()?;
    let norm2 = singular_values(c).first().copied().unwrap_or(0.0);
    contains_point_with(c, z, MEMBERSHIP_TOL_REL * (norm2 + z.norm()))
}

/// `z in W(C)` iff no half-plane `Re(e^{-ig} w) >= f(g)` excludes it, i.e.
/// `max_g lambda_min(Herm(e^{-ig}(C - zI))) <= tol`.
pub fn contains_point_with(c: &ComplexMatrix, z: c64, tol: f64) -> Result<bool> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    if n == 0 {
        return Ok(false);
    }
    let s = Support::new(c);
    let g = |t: f64| -> Result<f64> { Ok(s.value(t)? - (c64::from_polar(1.0, -t) * z).re) };
    // any grid angle already separating z settles the question
    let step = TAU / GRID as f64;
    for j in 0..GRID {
        if g(-PI + (j + 1) as f64 * step)? > tol {
            return Ok(false);
        }
    }
    let (_, best) = maximize_on_circle(g)?;
    Ok(best <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::cis;

    #[test]
    fn support_of_identity() {
        let i = ComplexMatrix::identity(3);
        assert!((support_value(&i, 0.0).unwrap().0 - 1.0).abs() < 1e-15);
        assert!(support_value(&i, PI / 2.0).unwrap().0.abs() < 1e-15);
    }

    #[test]
    fn diagonal_unit_examples() {
        let c = ComplexMatrix::from_phases(&[0.0, PI / 4.0, -PI / 4.0]);
        let s = classify_sector(&c).unwrap();
        assert!(s.sectorial);
        assert!((s.phi_max - PI / 4.0).abs() < 1e-10);
        assert!((s.phi_min + PI / 4.0).abs() < 1e-10);
        assert!(s.gamma_star.abs() < 1e-9);

        let c = ComplexMatrix::from_phases(&[0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]);
        assert!(!classify_sector(&c).unwrap().sectorial);
    }

    #[test]
    fn angles_past_pi_are_not_reduced() {
        let c = ComplexMatrix::from_phases(&[PI, 3.0 * PI / 4.0, -3.0 * PI / 4.0]);
        let s = classify_sector(&c).unwrap();
        assert!((s.gamma_star - PI).abs() < 1e-9);
        assert!((s.phi_max - 5.0 * PI / 4.0).abs() < 1e-10);
        assert!((s.phi_min - 3.0 * PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn positive_definite_has_zero_field_angle() {
        let c = ComplexMatrix::from_real(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let s = classify_sector(&c).unwrap();
        assert!(s.phi_max.abs() < 1e-10 && s.phi_min.abs() < 1e-10);
        assert!(s.field_angle.abs() < 1e-10);
    }

    #[test]
    fn zero_matrix_rejected() {
        assert_eq!(classify_sector(&ComplexMatrix::zeros(2, 2)).unwrap_err(), Error::ZeroMatrix);
    }

    #[test]
    fn traces() {
        let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        for p in boundary_trace(&h, 16).unwrap().points {
            assert!(p.im.abs() < 1e-14 && p.re.abs() <= 1.0 + 1e-14);
        }
        let nil = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let t = boundary_trace(&nil, 64).unwrap();
        let m = t.points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        assert!((m - 0.5).abs() < 1e-6);
        for p in boundary_trace(&ComplexMatrix::identity(2), 8).unwrap().points {
            assert!((p - c64::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(boundary_trace(&h, 4).is_err());
    }

    #[test]
    fn membership() {
        let i = ComplexMatrix::identity(2);
        assert!(contains_point(&i, c64::new(1.0, 0.0)).unwrap());
        assert!(!contains_point(&i, c64::new(0.0, 0.0)).unwrap());
        let d = ComplexMatrix::from_diag(&[cis(0.3), cis(-1.0)]);
        let mid = (cis(0.3) + cis(-1.0)) * 0.5;
        assert!(contains_point(&d, mid).unwrap());
        assert!(!contains_point(&d, mid * 0.9).unwrap());
    }
}
