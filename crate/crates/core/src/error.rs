use thiserror::Error;

/// Errors raised by constructions, certifiers and file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller passed arguments outside an operation's domain.
    #[error("input error: {0}")]
    Input(String),
    /// A structure (decomposition, embedding, cover) is internally inconsistent.
    #[error("structural error: {0}")]
    Structural(String),
    /// A file failed to parse.
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
