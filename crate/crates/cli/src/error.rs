use std::path::PathBuf;

use thiserror::Error;

use splitclosure::NewickError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Newick {
        path: String,
        #[source]
        source: NewickError,
    },

    #[error("{path}: line {line}: {message}")]
    SplitsFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Core(#[from] splitclosure::Error),

    #[error("{0}")]
    Usage(String),
}
