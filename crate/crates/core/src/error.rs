use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("symmetry precondition failed: {0}")]
    Symmetry(String),
    #[error("outside the valid domain at parameter {at}: {msg}")]
    Domain { at: f64, msg: String },
    #[error("shooting did not converge: {0}")]
    Convexity(String),
    #[error("bad profile: {0}")]
    Profile(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("spectrum truncated: need at least {minimal_count} eigenvalues")]
    Truncation { minimal_count: usize },
    #[error("fit failure: {0}")]
    Fit(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
