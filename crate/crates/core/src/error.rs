use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A formula would divide by (nearly) zero, typically on a reflecting
    /// hyperplane or at a critical point of a map.
    #[error("near-singular: {0}")]
    NearSingular(String),

    #[error("group too large: closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("not a character: {0}")]
    NotACharacter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A point lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("sampler error: {0}")]
    Sampler(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
