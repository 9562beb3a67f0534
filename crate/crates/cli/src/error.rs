use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] graphon_cheeger::Error),

    /// A graphon validation error traced back to its position in the input file.
    #[error("line {line}, column {column}: {source}")]
    Located {
        line: usize,
        column: usize,
        #[source]
        source: graphon_cheeger::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid preset `{0}`")]
    InvalidPreset(String),

    #[error("sbm with {blocks} blocks does not divide {n} cells evenly")]
    BlockMisalignment { blocks: usize, n: usize },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report: {0}")]
    Report(String),
}

impl CliError {
    /// A short machine-readable kind for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(_) | CliError::Located { .. } => "domain",
            CliError::Parse { .. } => "parse",
            CliError::InvalidPreset(_) => "invalid_preset",
            CliError::BlockMisalignment { .. } => "block_misalignment",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Report(_) => "report",
        }
    }

    /// The underlying graphon error, if any.
    pub fn graphon_error(&self) -> Option<&graphon_cheeger::Error> {
        match self {
            CliError::Domain(e) | CliError::Located { source: e, .. } => Some(e),
            _ => None,
        }
    }
}

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
