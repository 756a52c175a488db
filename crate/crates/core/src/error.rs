use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid tree at vertex `{vertex}`: {reason}")]
    Validation { vertex: String, reason: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An exact division left a nonzero remainder.
    #[error("inexact division: {0}")]
    Division(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("positivity violated: {0}")]
    Positivity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
