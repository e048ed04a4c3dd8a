use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KronError {
    #[error("index {index} out of range for order {order}")]
    Index { index: usize, order: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    /// Exact arithmetic left its closed set (e.g. √2 + √3 as a SqrtRational).
    #[error("closure error: {0}")]
    Closure(String),
    #[error("no convergence after {sweeps} sweeps (residual {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },
    #[error("requested order {requested} exceeds limit {limit}")]
    Resource { requested: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, KronError>;

pub(crate) fn check_index(index: usize, order: usize) -> Result<()> {
    if index == 0 || index > order {
        Err(KronError::Index { index, order })
    } else {
        Ok(())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(KronError::Dimension { expected, found })
    }
}
