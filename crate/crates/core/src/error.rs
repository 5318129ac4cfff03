use alloc::string::String;

use crate::matrix::Mat;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{q} is not the size of a subfield of F_{field}")]
    NotASubfield { q: u64, field: u64 },
    #[error("field too large for element tables: {0} elements")]
    FieldTooLarge(u64),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic irreducible")]
    NotIrreducible,
    #[error("polynomial does not divide the characteristic polynomial")]
    NotADivisor,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("spec `{spec}` violates the NI property at {witness}")]
    NiViolation { spec: String, witness: Mat },
    #[error("constants must be positive")]
    NonPositiveConstants,
    #[error("parameter out of range: {0}")]
    RangeError(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = core::result::Result<T, Error>;
