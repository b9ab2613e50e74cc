//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building configurations, allocations
/// or reports. Validation errors carry the offending value so callers can
/// produce actionable messages without re-deriving it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("system must contain at least one user")]
    EmptySystem,

    #[error("target rate for user {index} must be positive, got {value}")]
    NonPositiveRate { index: usize, value: f64 },

    #[error("time fraction for user {index} must be positive, got {value}")]
    NonPositiveFraction { index: usize, value: f64 },

    #[error("transmit SNR must be positive, got {value}")]
    NonPositiveSnr { value: f64 },

    #[error("time fractions must sum to 1, got {actual}")]
    FractionSumMismatch { actual: f64 },

    #[error("user index {index} out of range for {len} users")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("power coefficients sum to {total}, exceeding the unit budget")]
    PowerBudgetExceeded { total: f64 },

    #[error("power coefficient for user {index} must lie in [0, 1], got {value}")]
    CoefficientOutOfRange { index: usize, value: f64 },

    #[error("epsilon for user {index} must be nonnegative, got {value}")]
    NegativeEpsilon { index: usize, value: f64 },

    #[error("decoding order is not a permutation of the user indices")]
    InvalidPermutation,

    #[error("{count} decoding orders exceed the enumeration limit; raise --max-enumerate to proceed")]
    TooManyPermutations { count: u128 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid SNR grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scenario is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name, used by the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySystem => "EmptySystem",
            Error::NonPositiveRate { .. } => "NonPositiveRate",
            Error::NonPositiveFraction { .. } => "NonPositiveFraction",
            Error::NonPositiveSnr { .. } => "NonPositiveSnr",
            Error::FractionSumMismatch { .. } => "FractionSumMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::PowerBudgetExceeded { .. } => "PowerBudgetExceeded",
            Error::CoefficientOutOfRange { .. } => "CoefficientOutOfRange",
            Error::NegativeEpsilon { .. } => "NegativeEpsilon",
            Error::InvalidPermutation => "InvalidPermutation",
            Error::TooManyPermutations { .. } => "TooManyPermutations",
            Error::InvalidScenario(_) => "InvalidScenario",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
