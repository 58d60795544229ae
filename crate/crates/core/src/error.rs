use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("defining polynomial is reducible: {0}")]
    Reducible(String),

    #[error("X is not primitive: X^(N/{witness}) = 1")]
    NotPrimitive { witness: u64 },

    #[error("zero element has no logarithm or inverse")]
    ZeroElement,

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("duplicate point {0}")]
    DuplicatePoint(u64),

    #[error("invalid code parameters: {0}")]
    InvalidCode(String),

    #[error("degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("locator does not split into whole Frobenius orbits: {0}")]
    OrbitViolation(String),

    #[error("helper field too large: q^e = {0} exceeds the cap {1}")]
    HelperTooLarge(u64, u64),

    #[error(
        "attempt budget of {attempts} exhausted with {found} relations (success rate {rate:.4})"
    )]
    BudgetExhausted {
        attempts: u64,
        found: usize,
        rate: f64,
    },

    #[error("unknown factor-base element {0}")]
    UnknownBasisElement(u64),

    #[error("system is rank deficient modulo {modulus}: {detail}")]
    RankDeficient { modulus: u64, detail: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("chinese remaindering: {0}")]
    Crt(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
