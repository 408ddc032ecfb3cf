use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("backend `{0}` is not available")]
    BackendUnavailable(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeError {
        expected: Vec<usize>,
        got: Vec<usize>,
    },

    #[error("bad decomposition parameters: {0}")]
    BadParameters(String),

    #[error("deadlock detected: {0}")]
    DeadlockDetected(String),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("rank {rank} failed: {source}")]
    RankFailed {
        rank: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("rank {rank} panicked: {message}")]
    RankPanicked { rank: usize, message: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("variant mismatch: {0}")]
    VariantMismatch(String),

    #[error("invalid benchmark record: {0}")]
    InvalidRecord(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn shape(expected: &[usize], got: &[usize]) -> Self {
        Error::ShapeError {
            expected: expected.to_vec(),
            got: got.to_vec(),
        }
    }

    /// Strips `RankFailed` wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::RankFailed { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
