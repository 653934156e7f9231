use g2t_exact::ExactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("algebra: {0}")]
    Algebra(String),
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("input: {0}")]
    Input(String),
    #[error("check failed: {0}")]
    Check(String),
}
