use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("capacity: {0}")]
    Capacity(String),

    #[error("range: {0}")]
    Range(String),

    #[error("pole of the function at s = {0}")]
    Pole(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("precision: {0}")]
    Precision(String),

    #[error("contour: {0}")]
    Contour(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
