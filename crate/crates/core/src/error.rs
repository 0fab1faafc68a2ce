use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("map is not monic: {0}")]
    NotMonic(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("equalizing condition fails: {0}")]
    EqualizingConditionFails(String),
    #[error("comonoid mismatch: {0}")]
    ComonoidMismatch(String),
    #[error("induced map mismatch: {0}")]
    InducedMapMismatch(String),
    #[error("missing structure: {0}")]
    Missing(String),
    /// A verification ran and some named diagram failed.
    #[error("verification failed: {}", .0.failure_names().join(", "))]
    Check(Box<Report>),
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for malformed-input errors (CLI exit code 2).
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Parse { .. } | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
