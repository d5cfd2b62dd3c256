use alloc::string::String;

/// Failures raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} exceeds the supported range (< 2^31)")]
    ModulusTooLarge(u64),
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not alternating")]
    NotAlternating,
    #[error("pfaffian of an odd-sized matrix")]
    OddSize,
    #[error("weight {0} is not dominant")]
    NonDominant(String),
    #[error("symmetric power {0} is not supported (use 1..=4)")]
    UnsupportedPower(usize),
    #[error("input is not a character: {0}")]
    NotACharacter(String),
    #[error("matrix square is not scalar: {0}")]
    NotScalarSquare(String),
    #[error("matrix entries are not homogeneous of positive degree")]
    NotHomogeneous,
    #[error("potential mismatch between the two presentations")]
    PotentialMismatch,
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
