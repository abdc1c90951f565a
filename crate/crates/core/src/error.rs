use thiserror::Error;

/// Errors surfaced by the laboratory.
///
/// The three non-parse variants map onto distinct CLI exit codes: invalid
/// arguments (2), numerical non-convergence (3), and hypothesis violations
/// (4). A hypothesis violation is not a bug: it means the requested
/// diagnostic is vacuous or undefined for the given law (e.g. a law-of-the-
/// iterated-logarithm statistic for a non-normalized law).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}
