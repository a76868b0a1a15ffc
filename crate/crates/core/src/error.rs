use std::path::PathBuf;

use crate::metrics::MetricId;

/// Errors produced by qmorph-core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: no path between nodes {0} and {1}")]
    Disconnected(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate drawing: {0}")]
    DegenerateDrawing(String),

    #[error("size mismatch: expected {expected} points, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("metric {metric} is undefined: {reason}")]
    MetricUndefined { metric: MetricId, reason: String },

    #[error("metric state does not match the drawing: {0}")]
    InconsistentState(String),

    #[error("drawing already matches the target (baseline similarity is zero)")]
    AlreadyAtTarget,

    #[error("jitter exceeded {0} attempts without an acceptable proposal")]
    JitterExhausted(u64),

    #[error("unknown shape label `{0}`")]
    UnknownShape(String),

    #[error("statistics: {0}")]
    Statistics(String),

    #[error("parse error in {path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than a runtime failure.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            Error::JitterExhausted(_) | Error::InconsistentState(_) => false,
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
