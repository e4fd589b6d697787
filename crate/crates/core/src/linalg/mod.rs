//! Dense complex linear algebra primitives.
//!
//! Everything here is a pure function of its inputs. Sizes of interest are
//! desk scale (n up to a few dozen), so the routines favor robustness and
//! exact unitarity over blocking or cache tuning.

mod eig;
mod jacobi;
mod lu;
mod polar;
mod qr;
mod svd;
mod tridiag;

pub use eig::{general_eig, general_eig_with_vectors, hessenberg, GenEigen};
pub use jacobi::{hermitian_eig, hermitian_eigvals, HermEigen};
pub use lu::{det, inverse, solve, Lu};
pub use polar::{
    pd_inv_sqrt, pd_sqrt, pd_sqrt_with, polar_right, polar_right_with, pseudoinverse, pseudoinverse_with,
    range_residual, Polar,
};
pub use qr::{qr_decompose, qr_decompose_with, qr_thin, Qr};
pub use svd::{singular_values, svd, Svd};
pub use tridiag::hermitian_min_eigval;

/// Singular values below `rank_tol * sigma_1` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Hermitian matrices with `lambda_min <= pd_tol * ||P||_2` are not positive definite.
pub const DEFAULT_PD_TOL: f64 = 1e-10;
