//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field exponent must be at least 1")]
    BadExponent,
    #[error("field size {0} exceeds the supported range (q <= 2^31)")]
    FieldTooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("coefficient {code} is not an element of F_{q}")]
    MismatchedField { code: u64, q: u64 },
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("series shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("product of the F-tuple does not equal the product of the G-tuple")]
    ProductMismatch,
    #[error("evaluation point too close to the pole of zeta_q (|z| must stay below 1/q)")]
    PoleProximity,
    #[error("Euler product did not stabilize within the truncation cap L = {0}")]
    NonConvergence(u32),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
