use thiserror::Error;

/// Failure modes shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("input violates required structure: {what} (defect {defect:.3e})")]
    Structure { what: &'static str, defect: f64 },

    #[error("matrix is rank deficient (sigma_min / sigma_max = {ratio:.3e})")]
    Rank { ratio: f64 },

    #[error("matrix is not Hermitian positive definite (lambda_min = {lambda_min:.3e})")]
    Definiteness { lambda_min: f64 },

    #[error("eigenvalue within {distance:.3e} rad of -1: logarithm is on the branch cut")]
    BranchCut { distance: f64 },

    #[error("singular iterate encountered")]
    Singular,

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("step too large: projected argument is numerically rank deficient; retry with smaller t")]
    StepTooLarge,

    #[error("weighted sum of the data is singular (antipodal data)")]
    AntipodalData,

    #[error("order {0} is not supported")]
    UnsupportedOrder(usize),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
