use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("element does not belong to the ring context: {0}")]
    ContextMismatch(String),
    #[error("monomial of total degree {degree} does not survive truncation at {truncation}")]
    TruncationOverflow { degree: u64, truncation: u32 },
    #[error("leading coefficient of the divisor is not invertible")]
    NonInvertibleLeadingCoefficient,
    #[error("ring is infinite and cannot be enumerated")]
    InfiniteRing,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^31")]
    ModulusTooLarge(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}x{0} vs {1}x{1}")]
    ShapeMismatch(usize, usize),
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("change of basis is singular")]
    SingularBasis,
    #[error("matrix has non-constant entries; a field matrix is required")]
    NonConstantEntries,
    #[error("NotNilpotent: A^n is nonzero")]
    NotNilpotent,
    #[error(transparent)]
    Ring(#[from] RingError),
}
