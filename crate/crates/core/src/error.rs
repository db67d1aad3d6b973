use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("budget exceeded: {needed} items requested, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u64 },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no cell tuple satisfies the midpoint tolerance (p={p}, d={d}, delta={delta}); raise delta or d")]
    EmptySelection { p: usize, d: usize, delta: f64 },

    #[error("simplex stalled after {pivots} pivots")]
    SolverStalled { pivots: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("archive is empty: no scalarised problem has been solved")]
    EmptyArchive,

    #[error("batch item {index}: {source}")]
    Batch {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("solve failed for weight {weight:?}: {source}")]
    Solve {
        weight: Vec<f64>,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// The innermost error, with batch/weight tagging stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Batch { source, .. } | Error::Solve { source, .. } => source.root(),
            other => other,
        }
    }
}
