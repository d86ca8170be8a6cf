use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported degree {degree}: need at least {min}")]
    UnsupportedDegree { degree: usize, min: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("work budget exceeded: {required:.3e} operations required, budget is {budget:.3e}")]
    WorkBudgetExceeded { required: f64, budget: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedDegree { .. } => "unsupported-degree",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::NumericFailure(_) => "numeric-failure",
            Error::WorkBudgetExceeded { .. } => "budget-exceeded",
            Error::Domain(_) => "domain",
            Error::InvalidInput(_) => "invalid-input",
            Error::SelfCheck(_) => "self-check",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
