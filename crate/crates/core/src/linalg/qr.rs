//! Householder QR with the diagonal of `R` normalized to be real and
//! nonnegative, which makes the factorization unique for full-rank input.

use crate::error::{Error, Result};
use crate::linalg::DEFAULT_RANK_TOL;
use crate::matrix::{c64, ComplexMatrix, ONE, ZERO};

#[derive(Debug, Clone)]
pub struct Qr {
    /// `m x n` with orthonormal columns.
    pub q: ComplexMatrix,
    /// `n x n` upper triangular, real nonnegative diagonal.
    pub r: ComplexMatrix,
}

/// Thin QR of an `m x n` matrix with `m >= n`. Never fails; rank-deficient
/// input yields zeros on the diagonal of `R`.
pub fn qr_thin(a: &ComplexMatrix) -> Qr {
    let (m, n) = a.shape();
    assert!(m >= n, "qr_thin needs rows >= cols, got {m}x{n}");
    let mut r = a.clone();
    let mut reflectors: Vec<Option<Vec<c64>>> = Vec::with_capacity(n);

    for k in 0..n {
        let x: Vec<c64> = (k..m).map(|i| r[(i, k)]).collect();
        let normx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if normx == 0.0 {
            reflectors.push(None);
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * normx;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(None);
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        for j in k..n {
            let s: c64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * r[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] -= vi * s * 2.0;
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..m {
            r[(i, k)] = ZERO;
        }
        reflectors.push(Some(v));
    }

    let mut q = ComplexMatrix::from_fn(m, n, |i, j| if i == j { ONE } else { ZERO });
    for (k, v) in reflectors.iter().enumerate().rev() {
        let Some(v) = v else { continue };
        for j in 0..n {
            let s: c64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * q[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(k + t, j)] -= vi * s * 2.0;
            }
        }
    }

    let mut r = r.block(0, 0, n, n);
    for i in 0..n {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            continue;
        }
        let u = d / d.norm();
        for j in i..n {
            r[(i, j)] *= u.conj();
        }
        r[(i, i)] = c64::new(d.norm(), 0.0);
        for row in 0..m {
            q[(row, i)] *= u;
        }
    }
    Qr { q, r }
}

/// QR of a square nonsingular matrix; `diag(R) > 0`.
pub fn qr_decompose(a: &ComplexMatrix) -> Result<Qr> {
    qr_decompose_with(a, DEFAULT_RANK_TOL)
}

pub fn qr_decompose_with(a: &ComplexMatrix, rank_tol: f64) -> Result<Qr> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let f = qr_thin(a);
    let scale = a.norm_fro();
    if (0..a.rows()).any(|i| f.r[(i, i)].re <= rank_tol * scale) && a.rows() > 0 {
        return Err(Error::Singular);
    }
    Ok(f)
}
