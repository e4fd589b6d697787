//! LU with partial pivoting: solves, inverses and determinants.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, ONE, ZERO};

#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    odd: bool,
    scale: f64,
}

/// Relative pivot size below which the factor counts as singular.
const PIVOT_TOL: f64 = 1e-14;

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        a.ensure_finite()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = lu[(k, k)];
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
        let scale = a.max_abs();
        Ok(Self { lu, perm, odd, scale })
    }

    pub fn det(&self) -> c64 {
        let d: c64 = (0..self.lu.rows()).map(|i| self.lu[(i, i)]).product();
        if self.odd {
            -d
        } else {
            d
        }
    }

    pub fn is_singular(&self) -> bool {
        let n = self.lu.rows();
        (0..n).any(|i| self.lu[(i, i)].norm() <= PIVOT_TOL * self.scale * n as f64) || self.scale == 0.0 && n > 0
    }

    /// Solve `A X = B`. Fails with `Singular` on a negligible pivot.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.is_singular() {
            return Err(Error::Singular);
        }
        Ok(self.solve_raw(b, 0.0))
    }

    /// Solve with pivots floored at `floor` in modulus; used by inverse
    /// iteration, where the shifted matrix is singular by construction.
    pub(crate) fn solve_raw(&self, b: &ComplexMatrix, floor: f64) -> ComplexMatrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "rhs row count mismatch");
        let m = b.cols();
        let mut x = ComplexMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for j in 0..m {
            for i in 0..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                let mut piv = self.lu[(i, i)];
                if piv.norm() < floor {
                    piv = if piv == ZERO { c64::new(floor, 0.0) } else { piv / piv.norm() * floor };
                }
                x[(i, j)] = s / piv;
            }
        }
        x
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.lu.rows()))
    }
}

/// Solve `A X = B` for square nonsingular `A`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Lu::new(a)?.solve(b)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::new(a)?.inverse()
}

pub fn det(a: &ComplexMatrix) -> Result<c64> {
    if a.rows() == 0 && a.cols() == 0 {
        return Ok(ONE);
    }
    Ok(Lu::new(a)?.det())
}
