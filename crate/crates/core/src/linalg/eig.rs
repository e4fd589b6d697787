//! Nonsymmetric complex eigenvalues: Householder reduction to Hessenberg
//! form followed by Wilkinson-shifted QR sweeps with Givens rotations.
//! Eigenvectors, when requested, come from inverse iteration on the
//! original matrix.

use crate::error::{Error, Result};
use crate::linalg::lu::Lu;
use crate::matrix::{c64, ComplexMatrix, ONE, ZERO};

#[derive(Debug, Clone)]
pub struct GenEigen {
    /// Unordered.
    pub values: Vec<c64>,
    /// Unit-norm eigenvectors as columns, when requested.
    pub vectors: Option<ComplexMatrix>,
}

const DEFLATE_TOL: f64 = 1e-14;

/// Reduce to upper Hessenberg form by unitary similarity.
pub fn hessenberg(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<c64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let normx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if normx == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * normx;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // H <- P H, P = I - 2 v v* on rows k+1..n
        for j in 0..n {
            let s: c64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * s * 2.0;
            }
        }
        // H <- H P on columns k+1..n
        for i in 0..n {
            let s: c64 = v.iter().enumerate().map(|(t, vi)| h[(i, k + 1 + t)] * vi).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= s * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    Ok(h)
}

/// Unitary `[q1 q2]` with first column `(a, b)/|(a, b)|`, so that its adjoint
/// maps `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: c64, b: c64) -> [c64; 4] {
    let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return [ONE, ZERO, ZERO, ONE];
    }
    let (a, b) = (a / nrm, b / nrm);
    [a, -b.conj(), b, a.conj()]
}

fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(mut h: ComplexMatrix) -> Result<Vec<c64>> {
    let n = h.rows();
    let max_iters = 40 * n.max(1);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n as isize - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;

    while hi > 0 {
        let hi_u = hi as usize;
        let mut l = hi_u;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(l, l - 1)].norm() <= DEFLATE_TOL * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi_u {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iters {
            return Err(Error::NoConvergence { max_iters });
        }

        let mu = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi_u, hi_u)] + h[(hi_u, hi_u - 1)].norm() * 0.75 + c64::new(0.0, h[(hi_u, hi_u - 1)].norm() * 0.3)
        } else {
            wilkinson_shift(
                h[(hi_u - 1, hi_u - 1)],
                h[(hi_u - 1, hi_u)],
                h[(hi_u, hi_u - 1)],
                h[(hi_u, hi_u)],
            )
        };

        for i in l..=hi_u {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi_u - l);
        for k in l..hi_u {
            let g = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi_u {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = g[0].conj() * x + g[2].conj() * y;
                h[(k + 1, j)] = g[1].conj() * x + g[3].conj() * y;
            }
            h[(k + 1, k)] = ZERO;
            rots.push(g);
        }
        for (off, g) in rots.iter().enumerate() {
            let k = l + off;
            for i in l..=(k + 1).min(hi_u) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * g[0] + y * g[2];
                h[(i, k + 1)] = x * g[1] + y * g[3];
            }
        }
        for i in l..=hi_u {
            h[(i, i)] += mu;
        }
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Eigenvalues of a square complex matrix.
pub fn general_eig(a: &ComplexMatrix) -> Result<GenEigen> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let values = hessenberg_qr(hessenberg(a)?)?;
    Ok(GenEigen { values, vectors: None })
}

/// Eigenvalues plus unit eigenvectors by inverse iteration.
///
/// Clustered eigenvalues get vectors orthogonalized against the earlier
/// members of the cluster, which yields a basis of the eigenspace when the
/// matrix is diagonalizable.
pub fn general_eig_with_vectors(a: &ComplexMatrix) -> Result<GenEigen> {
    let mut e = general_eig(a)?;
    let n = a.rows();
    let norm = a.norm_fro().max(f64::MIN_POSITIVE);
    let floor = norm * 1e-15;
    let cluster_tol = 1e-8 * norm;
    let mut vecs: Vec<Vec<c64>> = Vec::with_capacity(n);

    for (j, &lambda) in e.values.iter().enumerate() {
        let shifted = ComplexMatrix::from_fn(n, n, |r, c| if r == c { a[(r, c)] - lambda } else { a[(r, c)] });
        let lu = Lu::new(&shifted)?;
        let cluster: Vec<usize> = (0..j).filter(|&i| (e.values[i] - lambda).norm() <= cluster_tol).collect();
        let mut x: Vec<c64> = (0..n)
            .map(|i| {
                let t = (i * 7 + j * 13 + 1) as f64;
                c64::new(1.0 + (t * 0.618).sin(), (t * 0.414).cos())
            })
            .collect();
        for _ in 0..4 {
            orthogonalize(&mut x, cluster.iter().map(|&i| &vecs[i]));
            normalize(&mut x);
            let rhs = ComplexMatrix::from_row_major(n, 1, x.clone());
            x = lu.solve_raw(&rhs, floor).into_vec();
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        orthogonalize(&mut x, cluster.iter().map(|&i| &vecs[i]));
        normalize(&mut x);
        vecs.push(x);
    }
    e.vectors = Some(ComplexMatrix::from_columns(&vecs));
    Ok(e)
}

fn orthogonalize<'a>(x: &mut [c64], basis: impl Iterator<Item = &'a Vec<c64>>) {
    for b in basis {
        let d: c64 = b.iter().zip(x.iter()).map(|(bi, xi)| bi.conj() * xi).sum();
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi -= d * bi;
        }
    }
}

fn normalize(x: &mut [c64]) {
    let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|z| *z /= n);
    }
}
