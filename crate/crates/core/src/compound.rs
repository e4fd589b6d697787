//! `k`-th compound matrices, compound spectra, sampled compound numerical
//! ranges, and witness checks of the inclusions between them.
//!
//! For `X` with `k` columns, `prod eig(X* A X) = det(X* A X)`, which is how
//! every range point is evaluated here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det, general_eig_with_vectors, inverse, qr_thin, singular_values, solve, svd};
use crate::matrix::{c64, ComplexMatrix, ONE};
use crate::numrange::contains_point_with;
use crate::phase::require_sectorial;
use crate::random::{self, complex_gaussian};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompoundMatrix {
    pub k: usize,
    pub base_dims: (usize, usize),
    pub matrix: ComplexMatrix,
    /// Row subsets in lexicographic order.
    pub row_subsets: Vec<Vec<usize>>,
    pub col_subsets: Vec<Vec<usize>>,
}

/// Matrix of all `k x k` minors, rows and columns indexed lexicographically.
pub fn compound(a: &ComplexMatrix, k: usize) -> Result<CompoundMatrix> {
    let (n, m) = a.shape();
    let max = n.min(m);
    if k == 0 || k > max {
        return Err(Error::BadOrder { k, max });
    }
    a.ensure_finite()?;
    let rows = k_subsets(n, k);
    let cols = k_subsets(m, k);
    let mut out = ComplexMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            out[(i, j)] = det(&a.select(r, c))?;
        }
    }
    Ok(CompoundMatrix {
        k,
        base_dims: (n, m),
        matrix: out,
        row_subsets: rows,
        col_subsets: cols,
    })
}

/// Products of eigenvalues over all `k`-subsets of indices.
pub fn compound_spectrum(a: &ComplexMatrix, k: usize) -> Result<Vec<c64>> {
    let n = a.ensure_square()?;
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    let lambda = crate::linalg::general_eig(a)?.values;
    Ok(k_subsets(n, k)
        .iter()
        .map(|s| s.iter().map(|&i| lambda[i]).product())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// `X* X = I`.
    Isometric,
    /// Any full column rank `X`.
    FullRank,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompoundSampleCloud {
    pub k: usize,
    pub kind: SampleKind,
    pub points: Vec<c64>,
    #[serde(skip)]
    pub witnesses: Vec<ComplexMatrix>,
}

/// Witness matrix for sample `index` of a seeded cloud.
fn draw_witness(n: usize, k: usize, seed: u64, index: u64, kind: SampleKind) -> ComplexMatrix {
    let mut rng = random::trial_rng(seed, index);
    loop {
        let g = complex_gaussian(&mut rng, n, k);
        match kind {
            SampleKind::Isometric => return qr_thin(&g).q,
            SampleKind::FullRank => {
                let s = singular_values(&g);
                if s[k - 1] > crate::linalg::DEFAULT_RANK_TOL * s[0] {
                    return g;
                }
            }
        }
    }
}

/// `prod eig(X* A X)`.
pub fn range_point(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<c64> {
    det(&a.congruence(x))
}

pub fn sample_compound_range(
    a: &ComplexMatrix,
    k: usize,
    n_samples: usize,
    seed: u64,
    kind: SampleKind,
) -> Result<CompoundSampleCloud> {
    let n = a.ensure_square()?;
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    let mut cloud = CompoundSampleCloud {
        k,
        kind,
        points: Vec::with_capacity(n_samples),
        witnesses: Vec::with_capacity(n_samples),
    };
    for i in 0..n_samples {
        let x = draw_witness(n, k, seed, i as u64, kind);
        cloud.points.push(range_point(a, &x)?);
        cloud.witnesses.push(x);
    }
    Ok(cloud)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CheckStats {
    pub checked: usize,
    pub failed: usize,
    pub worst_residual: f64,
}

impl CheckStats {
    fn record(&mut self, residual: f64, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
        if residual > self.worst_residual || residual.is_nan() {
            self.worst_residual = residual;
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub k: usize,
    /// `Lambda_k(A B^{-1})` inside `W_k(A) / W_k(B)`.
    pub quotient: CheckStats,
    /// `Lambda_k(A)` inside `W_k(A)`.
    pub spectrum: CheckStats,
    /// Sampled `W_k(A)` points inside `W(A_(k))`.
    pub compound_field: CheckStats,
    /// `Lambda_k(AB)` inside `W'_k(A) W'_k(B)`.
    pub product: CheckStats,
    /// Times `A` was perturbed to get a usable eigenvector basis.
    pub perturbations: usize,
    pub passed: bool,
}

pub const INCLUSION_TOL: f64 = 1e-7;
pub const MEMBERSHIP_TOL: f64 = 1e-6;

fn rel_residual(x: c64, y: c64) -> f64 {
    (x - y).norm() / (x.norm() + y.norm()).max(1e-300)
}

/// Eigen-decomposition with a well-conditioned eigenvector basis; `A` is
/// nudged by tiny seeded perturbations when the basis is nearly defective.
fn diagonalize(m: &ComplexMatrix, seed: u64, bumps: &mut usize) -> Result<(Vec<c64>, ComplexMatrix)> {
    let n = m.rows();
    let scale = m.norm_fro().max(1e-300);
    for attempt in 0..4u64 {
        let mm = if attempt == 0 {
            m.clone()
        } else {
            let mut rng = random::trial_rng(seed ^ 0x9e37_79b9, attempt);
            m + &complex_gaussian(&mut rng, n, n).scale_real(1e-9 * scale)
        };
        let e = general_eig_with_vectors(&mm)?;
        let v = e.vectors.expect("vectors requested");
        let s = singular_values(&v);
        if s[n - 1] > 1e-6 * s[0] {
            return Ok((e.values, v));
        }
        *bumps += 1;
    }
    Err(Error::DefectiveEigenvectors)
}

/// Witness checks of the compound-range inclusions for `A` and sectorial
/// `B`, plus `samples` membership checks of `W_k(A)` points in
/// `W(A_(k))`.
pub fn verify_inclusions(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<InclusionReport> {
    let n = a.ensure_square()?;
    if b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("A is {n}x{n}, B is {:?}", b.shape())));
    }
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, max: n });
    }
    require_sectorial(b)?;
    let subsets = k_subsets(n, k);
    let mut report = InclusionReport {
        k,
        quotient: CheckStats::default(),
        spectrum: CheckStats::default(),
        compound_field: CheckStats::default(),
        product: CheckStats::default(),
        perturbations: 0,
        passed: false,
    };

    // A y = lambda B y, i.e. eigenpairs of B^{-1} A
    let (lam, y) = diagonalize(&solve(b, a)?, seed, &mut report.perturbations)?;
    let all: Vec<usize> = (0..n).collect();
    for s in &subsets {
        let u = isometric_factor(&y.select(&all, s))?;
        let wa = range_point(a, &u)?;
        let wb = range_point(b, &u)?;
        let prod: c64 = s.iter().map(|&i| lam[i]).product();
        let r = rel_residual(wa, prod * wb);
        report.quotient.record(r, r <= INCLUSION_TOL);
    }

    let (lam, y) = diagonalize(a, seed.wrapping_add(1), &mut report.perturbations)?;
    for s in &subsets {
        let u = isometric_factor(&y.select(&all, s))?;
        let prod: c64 = s.iter().map(|&i| lam[i]).product();
        let r = rel_residual(range_point(a, &u)?, prod);
        report.spectrum.record(r, r <= INCLUSION_TOL);
    }

    let ak = compound(a, k)?.matrix;
    let ak_norm = singular_values(&ak)[0];
    let cloud = sample_compound_range(a, k, samples, seed.wrapping_add(2), SampleKind::Isometric)?;
    for (z, x) in cloud.points.iter().zip(&cloud.witnesses) {
        let xk = compound(x, k)?.matrix;
        let via_compound = crate::numrange::quadratic_form(&ak, &xk.column(0));
        let r = rel_residual(*z, via_compound);
        let inside = contains_point_with(&ak, *z, MEMBERSHIP_TOL * (ak_norm + z.norm()))?;
        report.compound_field.record(r, inside && r <= INCLUSION_TOL);
    }

    // left eigenvectors of AB: u* AB = lambda u*
    let ab = a * b;
    let (mu, v) = diagonalize(&ab.adjoint(), seed.wrapping_add(3), &mut report.perturbations)?;
    let b_inv = inverse(b)?;
    for s in &subsets {
        let u = v.select(&all, s);
        let yb = &b_inv * &u;
        let dy = range_point(b, &yb)?;
        let xb = yb.scale_real(dy.norm().powf(-1.0 / k as f64));
        let prod: c64 = s.iter().map(|&i| mu[i].conj()).product();
        let r = rel_residual(prod, range_point(a, &u)? * range_point(b, &xb)?);
        report.product.record(r, r <= INCLUSION_TOL);
    }

    report.passed = [report.quotient, report.spectrum, report.compound_field, report.product]
        .iter()
        .all(CheckStats::passed);
    Ok(report)
}

/// Isometric factor `U` of `Y = U P` for a full-column-rank `Y`.
fn isometric_factor(y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = singular_values(y);
    if s.last().copied().unwrap_or(0.0) <= crate::linalg::DEFAULT_RANK_TOL * s[0] {
        return Err(Error::RankDeficient);
    }
    let d = svd(y);
    Ok(&d.u * &d.v.adjoint())
}

/// `|(AB)_(k) - A_(k) B_(k)|_F / (|A_(k)|_F |B_(k)|_F)`.
pub fn binet_cauchy_residual(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> Result<f64> {
    let ab = compound(&(a * b), k)?.matrix;
    let ak = compound(a, k)?.matrix;
    let bk = compound(b, k)?.matrix;
    Ok((&ab - &(&ak * &bk)).norm_fro() / (ak.norm_fro() * bk.norm_fro()).max(1e-300))
}

/// `A_(n) = det A` as a 1x1 compound.
pub fn full_compound_is_det(a: &ComplexMatrix) -> Result<bool> {
    let n = a.ensure_square()?;
    let c = compound(a, n)?.matrix;
    let d = det(a)?;
    Ok((c[(0, 0)] - d).norm() <= 1e-12 * (d.norm() + ONE.norm()))
}
