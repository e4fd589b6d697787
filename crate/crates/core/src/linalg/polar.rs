use crate::error::{Error, Result};
use crate::linalg::jacobi::hermitian_eig;
use crate::linalg::svd::svd;
use crate::linalg::{DEFAULT_PD_TOL, DEFAULT_RANK_TOL};
use crate::matrix::ComplexMatrix;

/// Right polar decomposition `A = V P`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub v: ComplexMatrix,
    pub p: ComplexMatrix,
}

/// `A = V P` with `V` unitary and `P = (A*A)^{1/2}` positive definite.
pub fn polar_right(a: &ComplexMatrix) -> Result<Polar> {
    polar_right_with(a, DEFAULT_RANK_TOL)
}

pub fn polar_right_with(a: &ComplexMatrix, rank_tol: f64) -> Result<Polar> {
    a.ensure_square()?;
    a.ensure_finite()?;
    let d = svd(a);
    let smax = d.s.first().copied().unwrap_or(0.0);
    if d.s.iter().any(|&s| s <= rank_tol * smax) || (smax == 0.0 && a.rows() > 0) {
        return Err(Error::Singular);
    }
    let v = &d.u * &d.v.adjoint();
    let p = &(&d.v * &ComplexMatrix::from_real_diag(&d.s)) * &d.v.adjoint();
    Ok(Polar {
        v,
        p: p.hermitian_part(),
    })
}

fn pd_function(p: &ComplexMatrix, pd_tol: f64, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let e = hermitian_eig(p)?;
    let top = e.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(&min) = e.values.last() {
        if min <= pd_tol * top || top == 0.0 {
            return Err(Error::NotPositiveDefinite { min_eig: min });
        }
    }
    let fv: Vec<f64> = e.values.iter().map(|&v| f(v)).collect();
    let r = &(&e.vectors * &ComplexMatrix::from_real_diag(&fv)) * &e.vectors.adjoint();
    Ok(r.hermitian_part())
}

/// Principal square root of a Hermitian positive definite matrix.
pub fn pd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    pd_function(p, DEFAULT_PD_TOL, f64::sqrt)
}

/// `P^{-1/2}` for Hermitian positive definite `P`.
pub fn pd_inv_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    pd_function(p, DEFAULT_PD_TOL, |v| 1.0 / v.sqrt())
}

pub fn pd_sqrt_with(p: &ComplexMatrix, pd_tol: f64) -> Result<ComplexMatrix> {
    pd_function(p, pd_tol, f64::sqrt)
}

/// Moore-Penrose pseudoinverse; singular values below `1e-10 * sigma_1`
/// are treated as zero.
pub fn pseudoinverse(a: &ComplexMatrix) -> ComplexMatrix {
    pseudoinverse_with(a, DEFAULT_RANK_TOL)
}

pub fn pseudoinverse_with(a: &ComplexMatrix, rank_tol: f64) -> ComplexMatrix {
    let (m, n) = a.shape();
    let d = svd(a);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let mut out = ComplexMatrix::zeros(n, m);
    if smax == 0.0 {
        return out;
    }
    for (k, &s) in d.s.iter().enumerate() {
        if s <= rank_tol * smax {
            break;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vi = d.v[(i, k)] * inv;
            for j in 0..m {
                out[(i, j)] += vi * d.u[(j, k)].conj();
            }
        }
    }
    out
}

/// `(I - A A^+) B`, the part of `B` outside the range of `A`.
pub fn range_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let ap = pseudoinverse(a);
    let proj = &(a * &ap) * b;
    (b - &proj).norm_fro()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_of_unitary_and_pd() {
        let t = 0.4_f64;
        let u = ComplexMatrix::from_real(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        let f = polar_right(&u).unwrap();
        assert!((&f.v - &u).norm_fro() < 1e-14);
        assert!((&f.p - &ComplexMatrix::identity(2)).norm_fro() < 1e-14);

        let p0 = ComplexMatrix::from_real(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let f = polar_right(&p0).unwrap();
        assert!((&f.v - &ComplexMatrix::identity(2)).norm_fro() < 1e-14);
        assert!((&f.p - &p0).norm_fro() < 1e-14);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let r = pd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).norm_fro() < 1e-14);
        assert!(matches!(
            pd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn pinv_rank_deficient_diagonal() {
        let p = pseudoinverse(&ComplexMatrix::from_real_diag(&[2.0, 0.0]));
        assert!((&p - &ComplexMatrix::from_real_diag(&[0.5, 0.0])).norm_fro() < 1e-15);
        assert_eq!(pseudoinverse(&ComplexMatrix::zeros(2, 3)), ComplexMatrix::zeros(3, 2));
        let i = pseudoinverse(&ComplexMatrix::identity(3));
        assert!((&i - &ComplexMatrix::identity(3)).norm_fro() < 1e-15);
    }

    #[test]
    fn singular_polar_rejected() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(polar_right(&a).unwrap_err(), Error::Singular);
    }
}
