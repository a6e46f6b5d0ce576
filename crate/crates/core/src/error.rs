use thiserror::Error;

/// Errors surfaced by the library. Usage-level validation (flag parsing,
/// grid syntax) lives in the CLI crate; everything here is raised while
/// computing.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the function's domain (n = 0, above the cap,
    /// outside a custom table's covered range, below an envelope guard).
    #[error("domain error: {0}")]
    Domain(String),

    /// A custom-table or CSV input is malformed.
    #[error("format error: {0}")]
    Format(String),

    /// A configured limit was exceeded (window capacity, worker count).
    #[error("config error: {0}")]
    Config(String),

    /// 128-bit accumulator overflow; carries the term where it happened.
    #[error("overflow while accumulating term n = {n}")]
    Overflow { n: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Error {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Error {
        Error::Format(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Error {
        Error::Config(msg.into())
    }
}
