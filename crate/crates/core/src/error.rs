use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("s = {s} lies outside the strip <{alpha}, {beta}>")]
    StripViolation { s: Complex64, alpha: f64, beta: f64 },

    #[error("{what}: achieved error {achieved:.3e} exceeds target {target:.3e}")]
    Accuracy {
        what: String,
        achieved: f64,
        target: f64,
    },

    #[error("s = {s} is within {guard:.1e} of the pole at {pole}")]
    PoleProximity {
        s: Complex64,
        pole: Complex64,
        guard: f64,
    },

    #[error("expansion has {available} terms, {needed} required")]
    InsufficientTruncation { needed: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown function family `{0}`")]
    UnknownFamily(String),

    #[error("derivative of order {0} is not available")]
    MissingDerivative(usize),

    #[error("expansion is not appropriate: {0}")]
    NotAppropriate(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("boundary limit diverges: {0}")]
    Divergent(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of numerical accuracy, false for invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. }
                | Error::IllConditioned(_)
                | Error::Divergent(_)
                | Error::NonFinite(_)
                | Error::Classification(_)
        )
    }

    pub(crate) fn accuracy(what: impl Into<String>, achieved: f64, target: f64) -> Self {
        Error::Accuracy {
            what: what.into(),
            achieved,
            target,
        }
    }
}
