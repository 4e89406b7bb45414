use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested size {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },

    /// A computed result violated one of the structural identities that must
    /// hold exactly; never clamped or ignored.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
