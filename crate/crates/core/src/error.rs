use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A scheme that the requested operation does not model.
    #[error("unsupported scheme: {0}")]
    Usage(String),
    /// A valid scheme/model/option set that cannot be combined.
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
