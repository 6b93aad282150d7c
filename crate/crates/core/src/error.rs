use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Variant names are stable: the CLI
/// echoes them verbatim in its JSON error documents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(BigInt),
    #[error("stabilization did not settle within the twist cap {cap} (twist {twist})")]
    WindowExhausted { twist: i64, cap: i64 },
    #[error("sheaf is not locally free: {0}")]
    NotLocallyFree(String),
    #[error("splitting data inconsistent with a rank-2 bundle: {0}")]
    ProfileInconsistent(String),
    #[error("parity violated at prime {prime}: delta {delta}")]
    ParityViolation { prime: BigInt, delta: i64 },
    #[error("type delta {delta} at prime {prime} differs from 2*h0 = {twice_h0}")]
    IdentityViolation { prime: BigInt, delta: i64, twice_h0: i64 },
    #[error("fiber map is not surjective (cokernel nonzero in degree {degree})")]
    NotSurjective { degree: i64 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("quotient does not vanish on the relations modulo {0}")]
    IncompatibleQuotient(BigInt),
    #[error("prime {0} listed twice")]
    DuplicatePrime(BigInt),
    #[error("unsupported center: {0}")]
    UnsupportedCenter(String),
    #[error("configuration is not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("too many points for a del Pezzo model over Z: {0}")]
    TooManyPoints(String),
    #[error("operation needs a rank-2 bundle, got rank {0}")]
    RankMismatch(i64),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Machine-readable variant name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::CompositeModulus(_) => "CompositeModulus",
            Error::WindowExhausted { .. } => "WindowExhausted",
            Error::NotLocallyFree(_) => "NotLocallyFree",
            Error::ProfileInconsistent(_) => "ProfileInconsistent",
            Error::ParityViolation { .. } => "ParityViolation",
            Error::IdentityViolation { .. } => "IdentityViolation",
            Error::NotSurjective { .. } => "NotSurjective",
            Error::DegreeMismatch(_) => "DegreeMismatch",
            Error::IncompatibleQuotient(_) => "IncompatibleQuotient",
            Error::DuplicatePrime(_) => "DuplicatePrime",
            Error::UnsupportedCenter(_) => "UnsupportedCenter",
            Error::NotGeneralPosition(_) => "NotGeneralPosition",
            Error::TooManyPoints(_) => "TooManyPoints",
            Error::RankMismatch(_) => "RankMismatch",
            Error::Malformed(_) => "Malformed",
        }
    }
}
