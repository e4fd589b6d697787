//! Banded completion and banded decomposition in the cone `C[alpha, beta]`.
//!
//! Both work through the rotated Hermitian matrices
//! `M_b = e^{i(pi/2 - beta)} C + h.c.` and `M_a = e^{-i(pi/2 + alpha)} C + h.c.`,
//! which are positive semidefinite exactly when `C` is in the closed cone.
//! Each step is a three-group positive semidefinite problem solved with a
//! pseudoinverse; `C` is recovered from the two rotated blocks by a 2x2
//! linear solve per entry. When `alpha == beta` that system is singular and
//! the work is done on the Hermitian matrix `e^{-i alpha} C` instead.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::analysis::{cone_membership, ConeSpec};
use crate::error::{Error, Result};
use crate::linalg::{pseudoinverse, singular_values};
use crate::matrix::{cis, ComplexMatrix};
use crate::numrange::classify_sector;
use crate::phase::phases;

/// Relative bound on `|(I - E E^+) F|` before a pseudoinverse is trusted.
pub const RANGE_TOL: f64 = 1e-8;
/// Cone widths below this use the Hermitian special case.
pub const DEGENERATE_WIDTH: f64 = 1e-12;

/// Block-partitioned `p`-banded partial matrix with its target cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandedPartialRepr", into = "BandedPartialRepr")]
pub struct BandedPartial {
    pub block_sizes: Vec<usize>,
    pub p: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Specified blocks keyed by block `(i, j)`.
    pub blocks: BTreeMap<(usize, usize), ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct BlockEntry {
    i: usize,
    j: usize,
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct BandedPartialRepr {
    block_sizes: Vec<usize>,
    p: usize,
    alpha: f64,
    beta: f64,
    blocks: Vec<BlockEntry>,
}

impl TryFrom<BandedPartialRepr> for BandedPartial {
    type Error = Error;

    fn try_from(r: BandedPartialRepr) -> Result<Self> {
        let partial = BandedPartial {
            block_sizes: r.block_sizes,
            p: r.p,
            alpha: r.alpha,
            beta: r.beta,
            blocks: r.blocks.into_iter().map(|b| ((b.i, b.j), b.matrix)).collect(),
        };
        partial.validate()?;
        Ok(partial)
    }
}

impl From<BandedPartial> for BandedPartialRepr {
    fn from(p: BandedPartial) -> Self {
        BandedPartialRepr {
            block_sizes: p.block_sizes,
            p: p.p,
            alpha: p.alpha,
            beta: p.beta,
            blocks: p
                .blocks
                .into_iter()
                .map(|((i, j), matrix)| BlockEntry { i, j, matrix })
                .collect(),
        }
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    out.push(0);
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

fn check_width(alpha: f64, beta: f64) -> Result<()> {
    let width = beta - alpha;
    if !(0.0..PI).contains(&width) {
        return Err(Error::DegenerateCone { width });
    }
    Ok(())
}

impl BandedPartial {
    /// Partial with every in-band block taken from `c`.
    pub fn from_matrix(c: &ComplexMatrix, block_sizes: &[usize], p: usize, alpha: f64, beta: f64) -> Result<Self> {
        let off = offsets(block_sizes);
        if c.shape() != (off[block_sizes.len()], off[block_sizes.len()]) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {:?}, block sizes sum to {}",
                c.shape(),
                off[block_sizes.len()]
            )));
        }
        let q = block_sizes.len();
        let mut blocks = BTreeMap::new();
        for i in 0..q {
            for j in i.saturating_sub(p)..q.min(i + p + 1) {
                blocks.insert((i, j), c.block(off[i], off[j], block_sizes[i], block_sizes[j]));
            }
        }
        let partial = BandedPartial {
            block_sizes: block_sizes.to_vec(),
            p,
            alpha,
            beta,
            blocks,
        };
        partial.validate()?;
        Ok(partial)
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.alpha, self.beta)?;
        let q = self.block_sizes.len();
        if q == 0 || self.block_sizes.contains(&0) {
            return Err(Error::InvalidArgument("block sizes must be positive".into()));
        }
        for (&(i, j), m) in &self.blocks {
            if i >= q || j >= q {
                return Err(Error::InvalidArgument(format!("block ({i}, {j}) outside {q} blocks")));
            }
            if i.abs_diff(j) > self.p {
                return Err(Error::NotBanded { p: self.p, i, j });
            }
            if m.shape() != (self.block_sizes[i], self.block_sizes[j]) {
                return Err(Error::DimensionMismatch(format!(
                    "block ({i}, {j}) is {:?}, expected {:?}",
                    m.shape(),
                    (self.block_sizes[i], self.block_sizes[j])
                )));
            }
            m.ensure_finite()?;
        }
        for i in 0..q {
            for j in i.saturating_sub(self.p)..q.min(i + self.p + 1) {
                if !self.blocks.contains_key(&(i, j)) {
                    return Err(Error::InvalidArgument(format!("in-band block ({i}, {j}) is missing")));
                }
            }
        }
        Ok(())
    }

    /// Dense matrix with unspecified blocks set to zero.
    pub fn assemble(&self) -> ComplexMatrix {
        let off = offsets(&self.block_sizes);
        let n = self.n();
        let mut c = ComplexMatrix::zeros(n, n);
        for (&(i, j), m) in &self.blocks {
            c.set_block(off[i], off[j], m);
        }
        c
    }
}

/// Rotation angles of the two Hermitian forms.
fn gammas(alpha: f64, beta: f64) -> (f64, f64) {
    (FRAC_PI_2 - beta, -FRAC_PI_2 - alpha)
}

/// `e^{i g} C + e^{-i g} C*`.
fn rotated(c: &ComplexMatrix, g: f64) -> ComplexMatrix {
    let r = c.scale(cis(g));
    &r + &r.adjoint()
}

/// Solve `e^{i g1} X + e^{-i g1} Z = P`, `e^{i g2} X + e^{-i g2} Z = Q`
/// entrywise; returns `(X, Z)`.
fn unrotate(p: &ComplexMatrix, q: &ComplexMatrix, g1: f64, g2: f64) -> (ComplexMatrix, ComplexMatrix) {
    let (a, b, c, d) = (cis(g1), cis(-g1), cis(g2), cis(-g2));
    let det = a * d - b * c;
    let x = (&p.scale(d) - &q.scale(b)).scale(det.inv());
    let z = (&q.scale(a) - &p.scale(c)).scale(det.inv());
    (x, z)
}

/// `B E^+ F` after checking that the ranges of `B*` and `F` lie in the
/// range of `E`.
fn psd_corner(b: &ComplexMatrix, e: &ComplexMatrix, f: &ComplexMatrix) -> std::result::Result<ComplexMatrix, f64> {
    let ep = pseudoinverse(e);
    let proj = e * &ep;
    let scale = e.norm_fro().max(1e-300);
    for m in [f, &b.adjoint()] {
        let resid = (m - &(&proj * m)).norm_fro();
        if resid > RANGE_TOL * m.norm_fro().max(1e-12 * scale) {
            return Err(resid);
        }
    }
    Ok(&(b * &ep) * f)
}

fn window_phase_bounds(w: &ComplexMatrix) -> (f64, f64) {
    match classify_sector(w) {
        Ok(s) if s.sectorial => match phases(w, None) {
            Ok(p) => (p.min(), p.max()),
            Err(_) => (f64::NAN, f64::NAN),
        },
        _ => (f64::NAN, f64::NAN),
    }
}

fn infeasible(window: usize, w: &ComplexMatrix) -> Error {
    let (phi_min, phi_max) = window_phase_bounds(w);
    Error::InfeasibleWindow { window, phi_min, phi_max }
}

/// Tolerance used for window feasibility of the input.
pub const WINDOW_TOL: f64 = 1e-10;

/// Completion of a banded partial matrix inside `C[alpha, beta]`.
pub fn complete(partial: &BandedPartial) -> Result<ComplexMatrix> {
    partial.validate()?;
    let (alpha, beta) = (partial.alpha, partial.beta);
    let sizes = &partial.block_sizes;
    let q = sizes.len();
    let p = partial.p;
    let off = offsets(sizes);
    let mut c = partial.assemble();
    let cone = ConeSpec::Sector { alpha, beta };

    let span = |c: &ComplexMatrix, lo: usize, hi: usize| c.block(off[lo], off[lo], off[hi + 1] - off[lo], off[hi + 1] - off[lo]);
    for l in 0..q.saturating_sub(p).max(1) {
        let hi = (l + p).min(q - 1);
        let w = span(&c, l, hi);
        if !cone_membership(&w, &cone, WINDOW_TOL)?.member {
            return Err(infeasible(l, &w));
        }
    }

    let degenerate = beta - alpha < DEGENERATE_WIDTH;
    let (g1, g2) = gammas(alpha, beta);
    for d in p + 1..q {
        for i in 0..q - d {
            let j = i + d;
            let w = span(&c, i, j);
            // groups inside the window: block i | blocks i+1..j-1 | block j
            let n1 = sizes[i];
            let n3 = sizes[j];
            let n2 = w.rows() - n1 - n3;
            let corner = |m: &ComplexMatrix| -> std::result::Result<ComplexMatrix, f64> {
                let b = m.block(0, n1, n1, n2);
                let e = m.block(n1, n1, n2, n2);
                let f = m.block(n1, n1 + n2, n2, n3);
                psd_corner(&b, &e, &f)
            };
            let (x, y) = if degenerate {
                let herm = w.scale(cis(-alpha));
                let x = corner(&herm).map_err(|_| infeasible(i, &w))?;
                (x.scale(cis(alpha)), x.adjoint().scale(cis(alpha)))
            } else {
                let pb = corner(&rotated(&w, g1)).map_err(|_| infeasible(i, &w))?;
                let pa = corner(&rotated(&w, g2)).map_err(|_| infeasible(i, &w))?;
                let (x, z) = unrotate(&pb, &pa, g1, g2);
                (x, z.adjoint())
            };
            c.set_block(off[i], off[j], &x);
            c.set_block(off[j], off[i], &y);
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct BandedPart {
    /// First block covered by the core.
    pub block_offset: usize,
    /// First row/column covered by the core.
    pub row_offset: usize,
    pub core: ComplexMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandedDecomposition {
    pub n: usize,
    pub block_sizes: Vec<usize>,
    pub parts: Vec<BandedPart>,
}

impl BandedDecomposition {
    /// Part `idx` embedded as `diag(0, core, 0)`.
    pub fn embed(&self, idx: usize) -> ComplexMatrix {
        let part = &self.parts[idx];
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        m.set_block(part.row_offset, part.row_offset, &part.core);
        m
    }

    pub fn sum(&self) -> ComplexMatrix {
        (0..self.parts.len()).fold(ComplexMatrix::zeros(self.n, self.n), |acc, i| &acc + &self.embed(i))
    }
}

/// Relative size above which an out-of-band block counts as nonzero.
pub const BAND_TOL: f64 = 1e-12;

/// Split a `p`-banded matrix in `C[alpha, beta]` into a sum of cone
/// members, each supported on `p + 1` consecutive diagonal blocks.
pub fn decompose_banded(
    c: &ComplexMatrix,
    block_sizes: &[usize],
    p: usize,
    alpha: f64,
    beta: f64,
) -> Result<BandedDecomposition> {
    let n = c.ensure_square()?;
    c.ensure_finite()?;
    check_width(alpha, beta)?;
    let off = offsets(block_sizes);
    let q = block_sizes.len();
    if off[q] != n || q == 0 {
        return Err(Error::DimensionMismatch(format!("block sizes sum to {}, matrix is {n}x{n}", off[q])));
    }
    let scale = c.max_abs();
    for i in 0..q {
        for j in 0..q {
            if i.abs_diff(j) > p && c.block(off[i], off[j], block_sizes[i], block_sizes[j]).max_abs() > BAND_TOL * scale {
                return Err(Error::NotBanded { p, i, j });
            }
        }
    }
    if !cone_membership(c, &ConeSpec::Sector { alpha, beta }, WINDOW_TOL)?.member {
        return Err(Error::NotInCone { alpha, beta });
    }

    let degenerate = beta - alpha < DEGENERATE_WIDTH;
    let (g1, g2) = gammas(alpha, beta);
    let mut parts = Vec::new();
    let mut rest = c.clone();
    let mut first = 0;
    while q - first > p + 1 {
        // leading window: block `first` | blocks first+1..=first+p
        let r0 = off[first];
        let n1 = block_sizes[first];
        let end = off[first + p + 1];
        let n2 = end - r0 - n1;
        let w = rest.block(r0, r0, end - r0, end - r0);
        let schur = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            let a = m.block(0, 0, n1, n1);
            let b = m.block(0, n1, n1, n2);
            let ap = pseudoinverse(&a);
            let resid = (&b - &(&(&a * &ap) * &b)).norm_fro();
            if resid > RANGE_TOL * b.norm_fro().max(1e-12 * a.norm_fro()) {
                return Err(Error::NotInCone { alpha, beta });
            }
            Ok(&(&b.adjoint() * &ap) * &b)
        };
        let x22 = if degenerate {
            schur(&w.scale(cis(-alpha)))?.scale(cis(alpha))
        } else {
            let pb = schur(&rotated(&w, g1))?;
            let pa = schur(&rotated(&w, g2))?;
            unrotate(&pb, &pa, g1, g2).0
        };
        let mut core = w.clone();
        core.set_block(n1, n1, &x22);
        parts.push(BandedPart {
            block_offset: first,
            row_offset: r0,
            core,
        });
        let c22 = rest.block(r0 + n1, r0 + n1, n2, n2);
        rest.set_block(r0 + n1, r0 + n1, &(&c22 - &x22));
        first += 1;
    }
    let r0 = off[first];
    parts.push(BandedPart {
        block_offset: first,
        row_offset: r0,
        core: rest.block(r0, r0, n - r0, n - r0),
    });
    Ok(BandedDecomposition {
        n,
        block_sizes: block_sizes.to_vec(),
        parts,
    })
}

/// Smallest eigenvalue, relative to `|C|_2`, of the rotated forms that
/// certify membership in the closed cone.
pub fn certificate_slack(c: &ComplexMatrix, alpha: f64, beta: f64) -> Result<f64> {
    let cert = crate::analysis::rotated_certificate(c, alpha, beta)?;
    let s = singular_values(c).first().copied().unwrap_or(0.0).max(1e-300);
    Ok(cert.iter().copied().fold(f64::INFINITY, f64::min) / s)
}
