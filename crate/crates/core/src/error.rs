use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("division by zero: {0}")]
    Division(String),

    #[error("entropy {requested} is not reachable (largest attainable {attainable})")]
    UnreachableEntropy { requested: f64, attainable: f64 },

    #[error("level cutoff n_max = {n_max} too small: tail weight {tail:.3e} exceeds {limit:.0e}")]
    Cutoff { n_max: usize, tail: f64, limit: f64 },

    #[error("trajectory diverged at step {step} (x = {position})")]
    Divergence { step: usize, position: f64 },

    #[error("precondition failed for subsystem {subsystem}: {detail}")]
    Subsystem { subsystem: String, detail: String },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoreError::Domain(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoreError::Invariant(msg.into()))
}
