use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ZeroValuation,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("gram matrix is singular")]
    GramSingular,

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    GramAsymmetric { row: usize, col: usize },

    #[error("malformed gram matrix: {0}")]
    GramShape(String),

    #[error(
        "cannot certify p-adic units for p = {prime} at working precision p^{precision}; \
         increase the working precision"
    )]
    PrecisionExhausted { prime: u64, precision: u32 },

    #[error("jordan decomposition failed a consistency check at p = {prime}: {detail}")]
    JordanInconsistent { prime: u64, detail: String },

    #[error("cannot factor {0}: cofactor exceeds 64 bits after trial division")]
    FactorizationLimit(String),

    #[error("trace of basis product ({i}, {j}) is {value}, not an integer; basis does not span an order")]
    NonIntegralTrace { i: usize, j: usize, value: String },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("polynomial is reducible: {0}")]
    ReduciblePolynomial(String),

    #[error("basis matrix is singular or has the wrong shape")]
    SingularBasis,

    #[error("tame shape undefined for wild primes (p = {prime} divides a ramification index)")]
    TameShapeWild { prime: u64 },

    #[error("ramification data inconsistent: sum of e*f is {sum}, degree is {degree}")]
    RamInconsistent { sum: u64, degree: u64 },

    #[error("ramification data invalid: {0}")]
    RamInvalid(String),

    #[error("polynomial is not one of the recognized wild quartic shapes: {0}")]
    UnrecognizedQuartic(String),

    #[error("{0} is not squarefree")]
    DNotSquarefree(i64),

    #[error("d = {0} is excluded (need a squarefree integer other than 0 and 1)")]
    DExcluded(i64),

    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),

    #[error("discriminant {0} is not congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),

    #[error("form ({a}, {b}, {c}) is not primitive")]
    ImprimitiveForm { a: i64, b: i64, c: i64 },

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("negative definite forms are not supported here")]
    NegativeDefinite,

    #[error("|discriminant| = {disc} exceeds the configured limit {limit}")]
    DiscLimitExceeded { disc: i64, limit: i64 },

    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),

    #[error("redei 4-rank disagrees with the class-group oracle at d = {d}: oracle {oracle}, redei {redei}")]
    RedeiGateFailed { d: i64, oracle: u32, redei: u32 },

    #[error("{failed} of {total} quartic table rows failed verification")]
    TableFailed { failed: usize, total: usize },

    #[error("checkpoint log error: {0}")]
    Checkpoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code used in CLI error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroValuation => "ZERO_VALUATION",
            Error::NotPrime(_) => "NOT_PRIME",
            Error::GramSingular => "GRAM_SINGULAR",
            Error::GramAsymmetric { .. } => "GRAM_ASYMMETRIC",
            Error::GramShape(_) => "GRAM_SHAPE",
            Error::PrecisionExhausted { .. } => "PRECISION_EXHAUSTED",
            Error::JordanInconsistent { .. } => "JORDAN_INCONSISTENT",
            Error::FactorizationLimit(_) => "FACTORIZATION_LIMIT",
            Error::NonIntegralTrace { .. } => "NON_INTEGRAL_TRACE",
            Error::InvalidPolynomial(_) => "INVALID_POLYNOMIAL",
            Error::ReduciblePolynomial(_) => "REDUCIBLE_POLYNOMIAL",
            Error::SingularBasis => "SINGULAR_BASIS",
            Error::TameShapeWild { .. } => "TAME_SHAPE_WILD",
            Error::RamInconsistent { .. } => "RAM_INCONSISTENT",
            Error::RamInvalid(_) => "RAM_INVALID",
            Error::UnrecognizedQuartic(_) => "UNRECOGNIZED_QUARTIC",
            Error::DNotSquarefree(_) => "D_NOT_SQUAREFREE",
            Error::DExcluded(_) => "D_EXCLUDED",
            Error::SquareDiscriminant(_) => "SQUARE_DISCRIMINANT",
            Error::InvalidDiscriminant(_) => "INVALID_DISCRIMINANT",
            Error::ImprimitiveForm { .. } => "IMPRIMITIVE_FORM",
            Error::DiscriminantMismatch(..) => "DISCRIMINANT_MISMATCH",
            Error::NegativeDefinite => "NEGATIVE_DEFINITE",
            Error::DiscLimitExceeded { .. } => "DISC_LIMIT_EXCEEDED",
            Error::NotFundamental(_) => "NOT_FUNDAMENTAL",
            Error::RedeiGateFailed { .. } => "REDEI_GATE_FAILED",
            Error::TableFailed { .. } => "TABLE_FAILED",
            Error::Checkpoint(_) => "CHECKPOINT",
            Error::Parse(_) => "PARSE",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }
}
