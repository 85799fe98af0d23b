use std::path::PathBuf;

/// Errors surfaced by the solver library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} index {index} out of range [0, {bound})")]
    IndexRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("enumeration refused: {required} {what} exceeds budget cap {cap}")]
    OverBudget {
        what: &'static str,
        required: usize,
        cap: usize,
    },

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
