use std::path::PathBuf;

use thiserror::Error;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Config,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("word {word:?} appears in both the positive and the negative list")]
    ConflictingPolarity { word: String },

    #[error("delta word {word:?} is not in the base lexicon")]
    DeltaKeyMissing { word: String },

    #[error("delta for {word:?} does not change its polarity")]
    DeltaNoChange { word: String },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: unknown tag {tag:?}")]
    UnknownTag { line: usize, tag: String },

    #[error("invalid epsilon {value} for {kind}: |epsilon| must be < 0.5")]
    InvalidEpsilon { kind: String, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("exact enumeration is capped at {cap} nodes, graph has {nodes}")]
    TooManyNodes { nodes: usize, cap: usize },

    #[error("no labeled sentences to evaluate")]
    EmptyEvaluation,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. }
            | Error::ConflictingPolarity { .. }
            | Error::DeltaKeyMissing { .. }
            | Error::DeltaNoChange { .. }
            | Error::Malformed { .. }
            | Error::UnknownTag { .. }
            | Error::EmptyEvaluation => ErrorClass::Input,
            Error::InvalidEpsilon { .. } | Error::Config(_) => ErrorClass::Config,
            Error::Invariant(_) | Error::TooManyNodes { .. } => ErrorClass::Internal,
        }
    }

    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reads a whole file, attaching the path to any I/O failure.
pub fn read_file(path: impl Into<PathBuf>) -> Result<String> {
    let path = path.into();
    std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
}
