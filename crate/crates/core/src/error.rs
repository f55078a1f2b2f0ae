use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("unknown bound {0}")]
    UnknownBound(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
