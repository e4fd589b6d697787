//! Phases (canonical angles) of sectorial matrices.
//!
//! A sectorial `C` rotated by its canonical angle `g` has positive definite
//! Hermitian part: `e^{-ig} C = H + iK` with `H > 0`. Then `C` is congruent
//! to `e^{ig}(I + iM)` with `M = H^{-1/2} K H^{-1/2}` Hermitian, and the
//! phases are `g + arctan(eig M)`.

mod decomposition;
mod real;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::Range;

use serde::Serialize;

pub use decomposition::{
    gcf, gcf_from, sectorial_decomposition, spd, spd_from, GeneralizedCholesky, SectorialDecomposition,
    SymmetricPolar,
};
pub use real::{real_sectorial, RealSectorial};

use crate::error::{Error, Result};
use crate::linalg::{general_eig, hermitian_eig, pd_inv_sqrt, polar_right, solve, HermEigen};
use crate::matrix::{c64, cis, ComplexMatrix};
use crate::numrange::{classify_sector, SectorInfo};

/// Phases sorted descending, all inside `(theta, theta + pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseVector {
    pub phases: Vec<f64>,
    pub theta: f64,
}

impl PhaseVector {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `phi_1`.
    pub fn max(&self) -> f64 {
        self.phases.first().copied().unwrap_or(f64::NAN)
    }

    /// `phi_n`.
    pub fn min(&self) -> f64 {
        self.phases.last().copied().unwrap_or(f64::NAN)
    }

    pub fn spread(&self) -> f64 {
        self.max() - self.min()
    }

    /// Same phases moved by a common multiple of `2 pi` into
    /// `(theta, theta + pi)`.
    pub fn rebranch(&self, theta: f64) -> Result<PhaseVector> {
        if self.is_empty() {
            return Ok(PhaseVector { phases: Vec::new(), theta });
        }
        let m = ((theta - self.min()) / TAU).floor() + 1.0;
        let shift = m * TAU;
        if !(self.min() + shift > theta && self.max() + shift < theta + PI) {
            return Err(Error::BranchOutOfRange { theta });
        }
        Ok(PhaseVector {
            phases: self.phases.iter().map(|p| p + shift).collect(),
            theta,
        })
    }
}

/// Everything derived from the canonical rotation.
#[derive(Debug, Clone)]
pub(crate) struct Canonical {
    pub info: SectorInfo,
    /// Hermitian part of `e^{-ig} C`.
    pub h: ComplexMatrix,
    /// Eigen-decomposition of `H^{-1/2} K H^{-1/2}`, values descending.
    pub m: HermEigen,
}

impl Canonical {
    pub fn new(c: &ComplexMatrix) -> Result<Self> {
        let info = require_sectorial(c)?;
        let rotated = c.scale(cis(-info.gamma_star));
        let h = rotated.hermitian_part();
        let k = rotated.skew_part_over_i();
        let h_inv_sqrt = pd_inv_sqrt(&h).map_err(|_| Error::NotSectorial {
            accretivity: info.accretivity,
        })?;
        let m = hermitian_eig(&(&(&h_inv_sqrt * &k) * &h_inv_sqrt))?;
        Ok(Self { info, h, m })
    }

    pub fn phases(&self) -> PhaseVector {
        let g = self.info.gamma_star;
        PhaseVector {
            phases: self.m.values.iter().map(|l| g + l.atan()).collect(),
            theta: g - FRAC_PI_2,
        }
    }
}

pub(crate) fn require_sectorial(c: &ComplexMatrix) -> Result<SectorInfo> {
    let info = classify_sector(c)?;
    if !info.sectorial {
        return Err(Error::NotSectorial {
            accretivity: info.accretivity,
        });
    }
    Ok(info)
}

/// Phases of a sectorial matrix, on the canonical branch
/// `(g - pi/2, g + pi/2)` or moved into `(theta, theta + pi)` when an
/// override is given.
pub fn phases(c: &ComplexMatrix, theta_override: Option<f64>) -> Result<PhaseVector> {
    let pv = Canonical::new(c)?.phases();
    match theta_override {
        Some(theta) => pv.rebranch(theta),
        None => Ok(pv),
    }
}

/// Phases from `-arg(eig(C^{-1} C*)) / 2`, branched around the canonical
/// rotation.
pub fn phases_via_inverse_conjugate(c: &ComplexMatrix) -> Result<PhaseVector> {
    let info = require_sectorial(c)?;
    let g = info.gamma_star;
    let nu = general_eig(&solve(c, &c.adjoint())?)?.values;
    let twist = cis(2.0 * g);
    let mut phases: Vec<f64> = nu.iter().map(|v| g - 0.5 * (v * twist).arg()).collect();
    phases.sort_by(|a, b| b.total_cmp(a));
    Ok(PhaseVector {
        phases,
        theta: g - FRAC_PI_2,
    })
}

/// Angles of the eigenvalues, each taken in `(theta, theta + pi)` of the
/// phase interval; sorted descending.
pub fn eigenphases(c: &ComplexMatrix) -> Result<Vec<f64>> {
    let pv = phases(c, None)?;
    eigenphases_in(c, pv.theta)
}

/// Eigenvalue angles branched into `(theta - pi/2, theta + 3pi/2]`, which
/// contains `(theta, theta + pi)`.
pub fn eigenphases_in(c: &ComplexMatrix, theta: f64) -> Result<Vec<f64>> {
    let mid = theta + FRAC_PI_2;
    let mut out: Vec<f64> = general_eig(c)?
        .values
        .iter()
        .map(|l| mid + (l * cis(-mid)).arg())
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Angles of the eigenvalues of the unitary polar factor of `C`, branched
/// in `(m - pi, m + pi]` around their circular mean `m`; sorted descending.
pub fn psi_phases(c: &ComplexMatrix) -> Result<Vec<f64>> {
    c.ensure_square()?;
    let v = polar_right(c)?.v;
    let lambda = general_eig(&v)?.values;
    let sum: c64 = lambda.iter().sum();
    let mean = if sum.norm() > 1e-12 * lambda.len() as f64 { sum.arg() } else { 0.0 };
    let mut out: Vec<f64> = lambda.iter().map(|l| mean + (l * cis(-mean)).arg()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Index ranges of descending phases that agree within `tol` (chained).
pub fn phase_groups(phases: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=phases.len() {
        if i == phases.len() || (phases[i - 1] - phases[i]).abs() > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}
