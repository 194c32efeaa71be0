use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("regex parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("symbol class: {0}")]
    Class(String),

    #[error("resource limit: {what} exceeded cap of {cap} states")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("pattern too large: {0}")]
    TooLarge(String),

    #[error("automaton is not deterministic: {0}")]
    Nondeterministic(String),

    #[error("invalid automaton: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("too few points for growth classification: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("document error at {pointer}: {message}")]
    Document { pointer: String, message: String },

    #[error("unsupported document version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn class(msg: impl Into<String>) -> Self {
        Error::Class(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
