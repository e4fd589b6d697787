use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("eigenvalue iteration did not converge within {max_iters} iterations")]
    NoConvergence { max_iters: usize },
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("log-majorization needs strictly positive entries (index {index} is {value:e})")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("the zero matrix has no numerical-range angles")]
    ZeroMatrix,
    #[error("matrix is not sectorial (accretivity {accretivity:e})")]
    NotSectorial { accretivity: f64 },
    #[error("phases cannot be placed in ({theta}, {theta} + pi)")]
    BranchOutOfRange { theta: f64 },
    #[error("matrix has a non-negligible imaginary part")]
    NotReal,
    #[error("compound order {k} is outside 1..={max}")]
    BadOrder { k: usize, max: usize },
    #[error("eigenvector matrix is numerically defective")]
    DefectiveEigenvectors,
    #[error("witness matrix does not have full column rank")]
    RankDeficient,
    #[error("eigenvalue {index} of the product lies within {distance:e} rad of the branch cut")]
    BranchAmbiguity { index: usize, distance: f64 },
    #[error("phases must lie in (-pi, pi), found [{min}, {max}]")]
    PhasesOutOfRange { min: f64, max: f64 },
    #[error("alpha = {alpha} is outside the feasible range [{required}, {limit})")]
    InfeasibleAlpha {
        alpha: f64,
        required: f64,
        limit: f64,
    },
    #[error("phase spread {spread} is not below pi")]
    SpreadTooWide { spread: f64 },
    #[error("window {window} is not in the cone (phase bounds [{phi_min}, {phi_max}])")]
    InfeasibleWindow {
        window: usize,
        phi_min: f64,
        phi_max: f64,
    },
    #[error("cone width beta - alpha = {width} must lie in [0, pi)")]
    DegenerateCone { width: f64 },
    #[error("matrix is not in the cone C[{alpha}, {beta}]")]
    NotInCone { alpha: f64, beta: f64 },
    #[error("matrix has nonzero blocks outside bandwidth {p} (block {i},{j})")]
    NotBanded { p: usize, i: usize, j: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
