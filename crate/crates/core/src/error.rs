use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series inversion needs a constant term of +1 or -1, got {0}")]
    NonUnitConstant(String),
    #[error("substitution exponent must be at least 1")]
    ZeroExponent,
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("seed must avoid 0, 1 and -1")]
    ExcludedSeed,
    #[error("{0} is not an odd prime")]
    BadModulus(u32),
    #[error("polynomial is not fixed by the required maps: {0}")]
    NotFixed(String),
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
