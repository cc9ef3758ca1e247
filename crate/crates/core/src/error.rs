use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An integer argument lies outside the supported range.
    #[error("{what} = {value} is outside the supported range (max {max})")]
    Range {
        what: &'static str,
        value: u64,
        max: u64,
    },

    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (not a Dyck path, not a partition, crossing blocks, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// The rejection sampler ran out of attempts. Retrying with another stream may succeed.
    #[error("sampling budget of {attempts} attempts exhausted without acceptance")]
    SamplingBudget { attempts: u64 },

    /// A measure carries more untruncated mass than the tolerance allows.
    #[error("tail mass {tail_bound:e} exceeds truncation tolerance {tolerance:e}")]
    Precision { tail_bound: f64, tolerance: f64 },

    /// A solver precondition failed, e.g. a negative free cumulant.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative solver did not converge.
    #[error("solver did not converge: {message} (bracket [{lo}, {hi}])")]
    Solver { message: String, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
