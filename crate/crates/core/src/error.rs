use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} dimension {got} exceeds the cap of {cap}")]
    Cap { what: &'static str, got: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
