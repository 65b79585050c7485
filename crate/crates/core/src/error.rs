use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed caller input: bad lengths, out-of-range values, violated preconditions.
    #[error("invalid input: {0}")]
    Input(String),

    /// An instance or config that parses but breaks a domain invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A problem too large for an exhaustive routine.
    #[error("{what} refused: size {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// The instance admits no feasible assignment.
    #[error("instance is infeasible")]
    Infeasible,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    /// Dataset generation could not meet a row's optimum target within its draw budget.
    #[error("rejection budget of {budget} draws exhausted for row n={n} (target optimum {target})")]
    RejectionBudget { n: usize, target: usize, budget: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
