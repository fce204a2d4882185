//! Errors of the sweep layer and their process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    /// Invalid configuration or command line.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    /// Recomputed values disagree with reference data.
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    /// An invariant that must hold for every accepted tuple failed.
    #[error("property violation: {0}")]
    Property(String),
}

impl SweepError {
    /// `0` success, `1` verification mismatch, `2` configuration error, `3` internal property violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Mismatch(_) => 1,
            SweepError::Config(_) => 2,
            SweepError::Io(_) | SweepError::Csv(_) | SweepError::Json(_) | SweepError::Property(_) => 3,
        }
    }
}
