use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no resonant solution: {0}")]
    OffManifold(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("spectrum does not match grid: {0}")]
    Mismatch(String),
    #[error("unstable integration: {0}")]
    Unstable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
