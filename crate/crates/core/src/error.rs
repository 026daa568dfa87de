use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("singular triangular matrix: zero diagonal at row {0}")]
    Singular(usize),
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("fiducial equation failed on {failed} of {total} draws")]
    SolverBudget { failed: usize, total: usize },
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),
    #[error("not sigma-finite: {0}")]
    NotSigmaFinite(String),
    #[error("non-monotone model: {0}")]
    NonMonotone(String),
    #[error("singular data covariance: {0}")]
    SingularData(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
