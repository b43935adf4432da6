use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("height bound must be at least 1")]
    ZeroBound,
    #[error("height bound {bound} exceeds the supported maximum {max}")]
    BoundTooLarge { bound: u64, max: u64 },
    #[error("argument must be a positive integer, got {0}")]
    NonPositive(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("torsor point violates {0}")]
    TorsorInvariant(&'static str),
    #[error("point is not liftable: {0}")]
    NotLiftable(String),
    #[error("{0}")]
    OutsideDomain(String),
    #[error("weight function `{0}` carries no monotonicity annotation")]
    MissingAnnotation(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
