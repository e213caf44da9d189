use thiserror::Error;

/// Which marginal of a coupling an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Row sums, the constraint `pi 1 = mu`.
    Rows,
    /// Column sums, the constraint `pi^T 1 = nu`.
    Cols,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Rows => f.write_str("row"),
            Axis::Cols => f.write_str("column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} ({left} vs {right})")]
    DimensionMismatch {
        what: String,
        left: usize,
        right: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{axis} {index} has zero (or non-positive) sum")]
    ZeroSumLine { axis: Axis, index: usize },

    #[error("numerical instability in {context} at iteration {iteration}: {detail}")]
    NumericalInstability {
        context: String,
        iteration: usize,
        detail: String,
    },

    #[error("{context} did not converge in {iterations} iterations (constraint violation {violation:e})")]
    NotConverged {
        context: String,
        iterations: usize,
        violation: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn instability(context: &str, iteration: usize, detail: impl Into<String>) -> Self {
        Error::NumericalInstability {
            context: context.to_string(),
            iteration,
            detail: detail.into(),
        }
    }

    pub(crate) fn mismatch(what: impl Into<String>, left: usize, right: usize) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            left,
            right,
        }
    }

    /// True for the error class the CLI maps to exit code 2.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalInstability { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
