use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("abscissa {x} outside the domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("covering is incomplete: node {node} belongs to no subset")]
    CoveringIncomplete { node: usize },

    #[error("gamma function pole at {0}")]
    Pole(f64),

    #[error("series did not converge within {terms} terms")]
    Accuracy { terms: usize },

    #[error("collocation matrix is singular (condition number estimate {cond:e})")]
    Singular { cond: f64 },

    #[error("collocation matrix is rank deficient (condition number estimate {cond:e})")]
    RankDeficient { cond: f64 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerical solve itself, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::Singular { .. } | Error::RankDeficient { .. } | Error::Accuracy { .. } => true,
            Error::Context { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context { context: context.into(), source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
