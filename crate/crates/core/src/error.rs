use thiserror::Error;

use crate::dsl::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's contract (mismatched domains, wrong kind, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0}")]
    Parse(#[from] Diagnostic),

    #[error("kind `{0}` has no kappa hint; supply a solution set explicitly")]
    KappaUnavailable(String),

    #[error("no finite solution set for kind `{kind}`: kappa({n}) is infinite")]
    NoFiniteSolutionSet { kind: String, n: usize },

    #[error("budget exceeded: {what} (bound {bound})")]
    Budget { what: &'static str, bound: u64 },

    #[error("ill-defined functor `{functor}`: {witness}")]
    IllDefinedFunctor { functor: String, witness: String },

    #[error("no factorization: {0}")]
    NoFactorization(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
