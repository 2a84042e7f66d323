use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShellError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("trace line {line}: {message}")]
    Trace { line: u64, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("byte log line {line}: {message}")]
    ByteLog { line: u64, message: String },

    #[error(transparent)]
    Engine(#[from] accordiatron_core::Error),
}

impl ShellError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ShellError::Io {
            path: path.to_owned(),
            source,
        }
    }

    pub(crate) fn trace(line: u64, message: impl Into<String>) -> Self {
        ShellError::Trace {
            line,
            message: message.into(),
        }
    }
}
