use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("denominator {den} is divisible by the characteristic {p}")]
    DenDivisibleByP { den: u64, p: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no element of order {order} in a field of size {size}")]
    NoSuchOrder { order: u64, size: u64 },
    #[error("element is not a square")]
    NonSquare,
    #[error("field of size {0} is beyond the supported range")]
    FieldTooLarge(u128),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape is not special")]
    NotSpecial,
    #[error("group order exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
