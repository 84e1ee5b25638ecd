use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input: mismatched dimensions, bad indices,
    /// non-Hermitian arguments to spectral routines, invalid states.
    #[error("rejected input: {0}")]
    InvalidInput(String),

    /// The post-selected branch has (numerically) zero probability, so no
    /// conditional state exists.
    #[error("impossible outcome: success probability {probability:e} is at or below threshold")]
    ImpossibleOutcome { probability: f64 },

    /// A closed-form state or figure of merit is undefined at these parameters.
    #[error("degenerate state: {0}")]
    DegenerateState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
