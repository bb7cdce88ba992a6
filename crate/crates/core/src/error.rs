use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is infeasible")]
    Infeasible,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("graph is not bipartite: {0}")]
    NotBipartite(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    /// The operation would need more work than the configured budget allows.
    /// No partial answer is produced.
    #[error("budget exceeded: {what} needs {needed} units, budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A gadget configuration fell outside the P/M/U taxonomy.
    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
