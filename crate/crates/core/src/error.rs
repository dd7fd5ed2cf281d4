//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failed for case `{id}`: {message}")]
    Validation { id: String, message: String },

    #[error("unknown crash type `{0}`")]
    UnknownCrashType(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no sanitizer crash report found in log")]
    NoCrashDetected,

    #[error("execution backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("target binary missing: {}", .0.display())]
    BuildMissing(PathBuf),

    #[error("debugger missing: {0}")]
    DebuggerMissing(String),

    #[error("evidence graph has no edges")]
    EmptyEvidence,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Retryable transport failure (connection refused, 5xx, 429).
    #[error("transient provider failure: {0}")]
    Transient(String),

    #[error("provider error: {0}")]
    Provider(String),

    #[error("authentication error: {0}")]
    Auth(String),

    #[error("no recorded response for prompt digest {0}")]
    ReplayMiss(String),

    #[error("could not extract a candidate array: {0}")]
    ExtractionFailed(String),

    #[error("all {0} divergence samples failed to decode")]
    AllSamplesFailed(usize),

    #[error("no price configured for model `{0}`")]
    UnknownModelPrice(String),

    #[error("budget exceeded: spent ${spent:.4} of ${limit:.4}")]
    BudgetExceeded { spent: f64, limit: f64 },

    #[error("case has no ground truth to score against")]
    NoGroundTruth,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Reads a file into a string, attaching the path to any failure.
pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
