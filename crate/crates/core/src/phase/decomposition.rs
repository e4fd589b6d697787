use serde::Serialize;

use crate::error::Result;
use crate::linalg::{pd_sqrt, polar_right, qr_decompose};
use crate::matrix::{c64, cis, ComplexMatrix};
use crate::phase::{Canonical, PhaseVector};

/// `C = T* D T` with `D` diagonal unitary, phases descending along the
/// diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct SectorialDecomposition {
    pub t: ComplexMatrix,
    pub d: ComplexMatrix,
    pub phases: PhaseVector,
}

impl SectorialDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.d.congruence(&self.t)
    }
}

/// `C = P U P`, `P` positive definite, `U` unitary.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricPolar {
    pub p: ComplexMatrix,
    pub u: ComplexMatrix,
}

impl SymmetricPolar {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.p * &self.u) * &self.p
    }
}

/// `C = R* W R`, `R` upper triangular with positive diagonal, `W` unitary.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralizedCholesky {
    pub r: ComplexMatrix,
    pub w: ComplexMatrix,
}

impl GeneralizedCholesky {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.w.congruence(&self.r)
    }
}

pub fn sectorial_decomposition(c: &ComplexMatrix) -> Result<SectorialDecomposition> {
    let can = Canonical::new(c)?;
    let g = can.info.gamma_star;
    let q = &can.m.vectors;
    let h_sqrt = pd_sqrt(&can.h)?;
    let scale: Vec<f64> = can.m.values.iter().map(|l| (1.0 + l * l).sqrt()).collect();
    let d: Vec<c64> = can
        .m
        .values
        .iter()
        .zip(&scale)
        .map(|(l, s)| cis(g) * c64::new(1.0, *l) / *s)
        .collect();
    let root: Vec<f64> = scale.iter().map(|s| s.sqrt()).collect();
    let t = &(&ComplexMatrix::from_real_diag(&root) * &q.adjoint()) * &h_sqrt;
    Ok(SectorialDecomposition {
        t,
        d: ComplexMatrix::from_diag(&d),
        phases: can.phases(),
    })
}

/// Symmetric polar decomposition from a given sectorial decomposition.
pub fn spd_from(dec: &SectorialDecomposition) -> Result<SymmetricPolar> {
    let f = polar_right(&dec.t)?;
    let u = dec.d.congruence(&f.v);
    Ok(SymmetricPolar { p: f.p, u })
}

/// Generalized Cholesky factorization from a given sectorial decomposition.
pub fn gcf_from(dec: &SectorialDecomposition) -> Result<GeneralizedCholesky> {
    let f = qr_decompose(&dec.t)?;
    let w = dec.d.congruence(&f.q);
    Ok(GeneralizedCholesky { r: f.r, w })
}

pub fn spd(c: &ComplexMatrix) -> Result<SymmetricPolar> {
    spd_from(&sectorial_decomposition(c)?)
}

pub fn gcf(c: &ComplexMatrix) -> Result<GeneralizedCholesky> {
    gcf_from(&sectorial_decomposition(c)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn identity_factors() {
        let i = ComplexMatrix::identity(3);
        let s = sectorial_decomposition(&i).unwrap();
        assert!((&s.t - &i).norm_fro() < 1e-14);
        assert!((&s.d - &i).norm_fro() < 1e-14);
        let g = gcf(&i).unwrap();
        assert!((&g.r - &i).norm_fro() < 1e-14 && (&g.w - &i).norm_fro() < 1e-14);
    }

    #[test]
    fn diagonal_unit_phases() {
        let c = ComplexMatrix::from_phases(&[PI / 6.0, -PI / 6.0]);
        let s = sectorial_decomposition(&c).unwrap();
        assert!((s.d[(0, 0)].arg() - PI / 6.0).abs() < 1e-14);
        assert!((s.d[(1, 1)].arg() + PI / 6.0).abs() < 1e-14);
        assert!((&s.reconstruct() - &c).norm_fro() < 1e-14);
        let pu = spd(&c).unwrap();
        assert!((&pu.p - &ComplexMatrix::identity(2)).norm_fro() < 1e-13);
        assert!((&pu.u - &c).norm_fro() < 1e-13);
    }

    #[test]
    fn positive_definite_spd_and_gcf() {
        let c = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c64::new(3.0 + i as f64, 0.0)
            } else if i < j {
                c64::new(0.4, 0.3)
            } else {
                c64::new(0.4, -0.3)
            }
        });
        let pu = spd(&c).unwrap();
        assert!((&(&pu.p * &pu.p) - &c).norm_fro() < 1e-12);
        assert!((&pu.u - &ComplexMatrix::identity(3)).norm_fro() < 1e-12);
        let g = gcf(&c).unwrap();
        assert!((&g.w - &ComplexMatrix::identity(3)).norm_fro() < 1e-12);
        assert!((&g.r.adjoint_mul(&g.r) - &c).norm_fro() < 1e-12);
        for i in 0..3 {
            assert!(g.r[(i, i)].re > 0.0 && g.r[(i, i)].im == 0.0);
            for j in 0..i {
                assert_eq!(g.r[(i, j)], c64::new(0.0, 0.0));
            }
        }
    }
}
