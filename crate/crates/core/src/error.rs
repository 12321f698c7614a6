use thiserror::Error;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside the domain of {what}: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: String },
    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },
    #[error("argument of {what} lies on a branch cut: {at}")]
    BranchCut { what: &'static str, at: String },
    #[error("characteristic function did not decay below {eps:e} before q = {q_reached:e}")]
    NonDecay { eps: f64, q_reached: f64 },
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate division: {0}")]
    DegenerateDivision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
