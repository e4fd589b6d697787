//! Cyclic Jacobi for complex Hermitian matrices.

use crate::error::Result;
use crate::matrix::{c64, ComplexMatrix, ZERO};

/// Eigen-decomposition of a Hermitian matrix, values sorted descending.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    /// Unitary; column `j` belongs to `values[j]`.
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-14;

/// Complex Jacobi rotation annihilating the `(p, q)` entry of the 2x2
/// Hermitian block `[[app, apq], [conj(apq), aqq]]`.
///
/// Returns the unitary `G = [[g_pp, g_pq], [g_qp, g_qq]]` acting on columns
/// `p, q`; `G* A G` has a zero in position `(p, q)`.
#[inline]
pub(crate) fn rotation(app: f64, aqq: f64, apq: c64) -> [c64; 4] {
    let r = apq.norm();
    let e = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ec = e.conj();
    [c64::new(c, 0.0), c64::new(s, 0.0), ec * (-s), ec * c]
}

/// `M <- M G` restricted to columns `p, q` of an `rows x n` row-major buffer.
#[inline]
pub(crate) fn rotate_columns(m: &mut [c64], n: usize, rows: usize, p: usize, q: usize, g: &[c64; 4]) {
    for k in 0..rows {
        let mp = m[k * n + p];
        let mq = m[k * n + q];
        m[k * n + p] = mp * g[0] + mq * g[2];
        m[k * n + q] = mp * g[1] + mq * g[3];
    }
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = h.ensure_square()?;
    h.ensure_finite()?;
    let mut a = h.hermitian_part().into_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n).into_vec());
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= OFF_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let g = rotation(a[p * n + p].re, a[q * n + q].re, apq);
                rotate_columns(&mut a, n, n, p, q, &g);
                // rows: A <- G* A
                for k in 0..n {
                    let ap = a[p * n + k];
                    let aq = a[q * n + k];
                    a[p * n + k] = g[0].conj() * ap + g[2].conj() * aq;
                    a[q * n + k] = g[1].conj() * ap + g[3].conj() * aq;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, n, n, p, q, &g);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]));
    Ok((values, vectors))
}

/// Eigenvalues (descending) and unitary eigenvectors of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H*)/2` before iterating.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermEigen> {
    let (values, vectors) = jacobi(h, true)?;
    Ok(HermEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(h, false)?.0)
}
