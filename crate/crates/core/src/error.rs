use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input failed a structural or physical validity check.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("numerical error: {message} (after {iterations} iterations)")]
    Numerical { message: String, iterations: usize },

    /// A requested dimension exceeds a configured cap.
    #[error("capacity error: {what} needs {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// Mathematically undefined result, e.g. infinite relative entropy.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Fock cutoff too small for the populations being carried.
    #[error("cutoff error: population {mass:.3e} at the Fock cutoff n_max = {n_max} ({context}); increase n_max")]
    Cutoff {
        n_max: usize,
        mass: f64,
        context: &'static str,
    },

    /// Operation requires a different field representation.
    #[error("representation error: {0}")]
    Representation(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
