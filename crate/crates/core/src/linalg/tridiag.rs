//! Smallest eigenvalue of a Hermitian matrix by Householder reduction to
//! tridiagonal form and Sturm-sequence bisection.
//!
//! This is the hot path of every support-function evaluation, where only
//! `lambda_min` is needed and a full Jacobi solve is several times slower.

use crate::error::Result;
use crate::matrix::{c64, ComplexMatrix};

/// Diagonal and off-diagonal magnitudes of a unitarily similar real
/// symmetric tridiagonal matrix.
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a = h.hermitian_part().into_vec();
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut u = vec![c64::new(0.0, 0.0); n];
    let mut w = vec![c64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 { c64::new(1.0, 0.0) } else { x0 / x0.norm() };
        for i in k + 1..n {
            u[i] = a[i * n + k];
        }
        u[k + 1] += phase * alpha;
        let un = (k + 1..n).map(|i| u[i].norm_sqr()).sum::<f64>().sqrt();
        for ui in &mut u[k + 1..n] {
            *ui /= un;
        }
        // p = A u, K = u* p, w = p - K u; A <- A - 2(u w* + w u*)
        for i in k + 1..n {
            w[i] = (k + 1..n).map(|j| a[i * n + j] * u[j]).sum();
        }
        let kk: f64 = (k + 1..n).map(|i| (u[i].conj() * w[i]).re).sum();
        for i in k + 1..n {
            w[i] -= u[i] * kk;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= (u[i] * w[j].conj() + w[i] * u[j].conj()) * 2.0;
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    let d = (0..n).map(|i| a[i * n + i].re).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `x`.
fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let prev = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1e-300) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a Hermitian matrix (symmetrized as `(H + H*)/2`).
pub fn hermitian_min_eigval(h: &ComplexMatrix) -> Result<f64> {
    let n = h.ensure_square()?;
    h.ensure_finite()?;
    match n {
        0 => return Ok(0.0),
        1 => return Ok(h[(0, 0)].re),
        2 => {
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let b = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
            return Ok(0.5 * (a + d) - (0.5 * (a - d)).hypot(b.norm()));
        }
        _ => {}
    }
    let (d, e) = tridiagonalize(h);
    let radius = |i: usize| {
        let l = if i > 0 { e[i - 1] } else { 0.0 };
        let r = if i + 1 < n { e[i] } else { 0.0 };
        l + r
    };
    let mut lo = (0..n).map(|i| d[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| d[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    while hi - lo > 2.0 * f64::EPSILON * scale {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&d, &e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
