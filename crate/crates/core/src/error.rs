use thiserror::Error;

/// Errors produced by solver components.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument violates a domain precondition (wrong range, infeasible set, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A vector contains NaN or infinite entries where finite values are required.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Two sequences that must be index-aligned have different lengths.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// An oracle failed inside a run; the iteration index is attached.
    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<CoreError>,
    },
}

impl CoreError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CoreError::Domain(msg.into())
    }

    pub fn at_iteration(self, iteration: usize) -> Self {
        CoreError::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
