use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Machine-readable failure category, used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Configuration,
    AssumptionViolation,
    NonConvergence,
    NumericalInstability,
    Io,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Configuration => "configuration",
            Category::AssumptionViolation => "assumption-violation",
            Category::NonConvergence => "non-convergence",
            Category::NumericalInstability => "numerical-instability",
            Category::Io => "io",
        }
    }

    /// Process exit code. Stable; documented in the README.
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Io => 1,
            Category::Configuration => 2,
            Category::AssumptionViolation => 3,
            Category::NonConvergence => 4,
            Category::NumericalInstability => 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("assumption violated [{assumption}]: {detail}")]
    Assumption {
        assumption: &'static str,
        detail: String,
    },

    #[error("no convergence after {} iterations (last sup-norm update {:e})", history.len(), history.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { history: Vec<f64> },

    #[error("numerical instability at step {step}: {detail}")]
    Instability { step: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::Parse(_) | Error::MeshMismatch(_) => {
                Category::Configuration
            }
            Error::Assumption { .. } => Category::AssumptionViolation,
            Error::NonConvergence { .. } => Category::NonConvergence,
            Error::Instability { .. } => Category::NumericalInstability,
            Error::Io(_) => Category::Io,
        }
    }

    pub(crate) fn assumption(assumption: &'static str, detail: impl Into<String>) -> Self {
        Error::Assumption {
            assumption,
            detail: detail.into(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
