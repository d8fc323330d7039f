use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad magic, unsupported version, or unparseable record.
    #[error("format error: {0}")]
    Format(String),
    /// Payload shorter or longer than the header declares.
    #[error("length error: {0}")]
    Length(String),
    /// Structurally valid input carrying invalid values.
    #[error("data error: {0}")]
    Data(String),
    /// Caller-supplied argument outside its contract.
    #[error("argument error: {0}")]
    Argument(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
