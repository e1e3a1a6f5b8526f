use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operation requires a modular quality function")]
    UnsupportedQuality,

    #[error("search space too large: {size} candidates exceeds the limit of {limit}")]
    TooLarge { size: f64, limit: f64 },

    #[error("metric violated: d({x},{z}) exceeds d({x},{y}) + d({y},{z}) by {slack}")]
    MetricViolation {
        x: usize,
        y: usize,
        z: usize,
        slack: f64,
    },

    #[error("document {doc} has a zero-norm feature vector")]
    DegenerateVector { doc: String },

    #[error("malformed input at {}", format_lines(.errors))]
    Parse { errors: Vec<(usize, String)> },

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

fn format_lines(errors: &[(usize, String)]) -> String {
    errors
        .iter()
        .map(|(line, msg)| format!("line {line}: {msg}"))
        .collect::<Vec<_>>()
        .join("; ")
}
