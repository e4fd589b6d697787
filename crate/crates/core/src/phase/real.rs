//! Real sectorial decomposition `C = T^T D T` for real `C`, with `T` real
//! and `D` block diagonal: 2x2 rotations `[[cos w, -sin w], [sin w, cos w]]`
//! (`w > 0`, descending) followed by 1x1 unit blocks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, hermitian_eigvals, pd_inv_sqrt, pd_sqrt, polar_right, qr_decompose, svd};
use crate::matrix::{c64, ComplexMatrix, I};
use crate::numrange::classify_sector;
use crate::phase::{GeneralizedCholesky, SymmetricPolar};

#[derive(Debug, Clone, Serialize)]
pub struct RealSectorial {
    pub t: ComplexMatrix,
    pub d: ComplexMatrix,
    /// Rotation angles of the 2x2 blocks of `D` before any sign flip.
    pub block_angles: Vec<f64>,
    /// `C` had negative definite symmetric part; `D` carries the sign.
    pub negated: bool,
    pub spd: SymmetricPolar,
    pub gcf: GeneralizedCholesky,
}

/// Unit vector scaled so its first (near-)largest component is real positive.
fn normalize_phase(v: &mut [c64]) {
    let top = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if let Some(z) = v.iter().find(|z| z.norm() >= top * (1.0 - 1e-10)).copied() {
        let rot = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

pub fn real_sectorial(c: &ComplexMatrix) -> Result<RealSectorial> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    if !c.is_real(1e-12 * c.max_abs()) {
        return Err(Error::NotReal);
    }
    let c = c.real_part();
    let h0 = c.hermitian_part();
    let ev = hermitian_eigvals(&h0)?;
    let top = ev.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pd_tol = 1e-10 * top;
    let negated = match (ev.first(), ev.last()) {
        (Some(&hi), Some(&lo)) if lo > pd_tol => {
            let _ = hi;
            false
        }
        (Some(&hi), Some(_)) if hi < -pd_tol => true,
        _ => {
            let accretivity = classify_sector(&c).map(|s| s.accretivity).unwrap_or(0.0);
            return Err(Error::NotSectorial { accretivity });
        }
    };
    let c = if negated { -&c } else { c };
    let h = c.hermitian_part();
    let s = &c - &h;
    let h_half = pd_sqrt(&h)?.real_part();
    let h_inv_half = pd_inv_sqrt(&h)?.real_part();
    let k = (&(&h_inv_half * &s) * &h_inv_half).real_part();

    // iK is Hermitian; its +-mu eigenpairs give the rotation planes
    let e = hermitian_eig(&k.scale(I))?;
    let zero_tol = 1e-12 * (1.0 + k.max_abs());
    let mut columns: Vec<Vec<c64>> = Vec::with_capacity(n);
    let mut scales: Vec<f64> = Vec::with_capacity(n);
    let mut d = ComplexMatrix::zeros(n, n);
    let mut block_angles = Vec::new();
    let sqrt2 = std::f64::consts::SQRT_2;
    for (j, &mu) in e.values.iter().enumerate() {
        if mu <= zero_tol {
            break;
        }
        let mut v = e.vectors.column(j);
        normalize_phase(&mut v);
        columns.push(v.iter().map(|z| c64::new(sqrt2 * z.re, 0.0)).collect());
        columns.push(v.iter().map(|z| c64::new(sqrt2 * z.im, 0.0)).collect());
        let r = (1.0 + mu * mu).sqrt();
        let (cw, sw) = (1.0 / r, mu / r);
        let b = 2 * block_angles.len();
        d[(b, b)] = c64::new(cw, 0.0);
        d[(b, b + 1)] = c64::new(-sw, 0.0);
        d[(b + 1, b)] = c64::new(sw, 0.0);
        d[(b + 1, b + 1)] = c64::new(cw, 0.0);
        scales.extend([r.sqrt(), r.sqrt()]);
        block_angles.push(mu.atan());
    }

    // the kernel of K is a real subspace; pull a real basis out of the
    // complex eigenvectors
    let kernel: Vec<usize> = (0..n).filter(|&j| e.values[j].abs() <= zero_tol).collect();
    if !kernel.is_empty() {
        let mut parts = Vec::with_capacity(2 * kernel.len());
        for &j in &kernel {
            let v = e.vectors.column(j);
            parts.push(v.iter().map(|z| c64::new(z.re, 0.0)).collect::<Vec<_>>());
            parts.push(v.iter().map(|z| c64::new(z.im, 0.0)).collect::<Vec<_>>());
        }
        let basis = svd(&ComplexMatrix::from_columns(&parts)).u;
        for j in 0..kernel.len() {
            let mut col = basis.column(j);
            if let Some(z) = col.iter().find(|z| z.re.abs() > 1e-12).copied() {
                if z.re < 0.0 {
                    col.iter_mut().for_each(|x| *x = -*x);
                }
            }
            columns.push(col.iter().map(|z| c64::new(z.re, 0.0)).collect());
            scales.push(1.0);
        }
    }
    let pairs = block_angles.len();
    if columns.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "real block structure found {} of {n} directions",
            columns.len()
        )));
    }
    for i in 2 * pairs..n {
        d[(i, i)] = c64::new(1.0, 0.0);
    }
    let q = ComplexMatrix::from_columns(&columns);
    let t = (&(&ComplexMatrix::from_real_diag(&scales) * &q.transpose()) * &h_half).real_part();
    let d = if negated { -&d } else { d };

    let pol = polar_right(&t)?;
    let v = pol.v.real_part();
    let spd = SymmetricPolar {
        p: pol.p.real_part(),
        u: (&(&v.transpose() * &d) * &v).real_part(),
    };
    let qr = qr_decompose(&t)?;
    let qq = qr.q.real_part();
    let gcf = GeneralizedCholesky {
        r: qr.r.real_part(),
        w: (&(&qq.transpose() * &d) * &qq).real_part(),
    };
    Ok(RealSectorial {
        t,
        d,
        block_angles,
        negated,
        spd,
        gcf,
    })
}
