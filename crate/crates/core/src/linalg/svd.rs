//! One-sided (Hestenes) Jacobi SVD.
//!
//! Orthogonalizes the columns of `A` directly instead of diagonalizing
//! `A*A`, so small singular values keep absolute accuracy near
//! `eps * sigma_1`. Rank decisions downstream depend on that.

use crate::linalg::jacobi::{rotate_columns, rotation};
use crate::matrix::{c64, ComplexMatrix, ZERO};

/// Thin SVD `A = U diag(s) V*` with `r = min(m, n)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

const MAX_SWEEPS: usize = 80;

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    let mut w = a.as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    let col_norm2 = |w: &[c64], j: usize| (0..m).map(|i| w[i * n + j].norm_sqr()).sum::<f64>();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_norm2(&w, p);
                let beta = col_norm2(&w, q);
                let gamma: c64 = (0..m).map(|i| w[i * n + p].conj() * w[i * n + q]).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let rot = rotation(alpha, beta, gamma);
                rotate_columns(&mut w, n, m, p, q, &rot);
                rotate_columns(&mut v, n, n, p, q, &rot);
            }
        }
        if !rotated {
            break;
        }
    }

    let s_raw: Vec<f64> = (0..n).map(|j| col_norm2(&w, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s_raw[j].total_cmp(&s_raw[i]));
    let s: Vec<f64> = order.iter().map(|&j| s_raw[j]).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, j| {
        let src = order[j];
        if s_raw[src] > 0.0 {
            w[i * n + src] / s_raw[src]
        } else {
            ZERO
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Svd { u, s, v }
}

/// Singular values sorted descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).s
}
