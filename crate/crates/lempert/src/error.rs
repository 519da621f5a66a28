use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (dimension mismatch,
    /// parameter outside its validity region, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The operation is not supported for this domain variant.
    #[error("unsupported for this domain variant: {0}")]
    Capability(String),

    /// Parameters are outside the range where the derivation's constants hold.
    #[error("out of certified range: {0}")]
    Range(String),

    /// A constructor's verification step failed.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A numerical evaluation produced non-finite values or failed to converge.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A bound computation could not produce any result.
    #[error("computation failed: {0}")]
    Computation(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
    pub fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
