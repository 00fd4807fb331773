use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested range does not fit the configured memory or scan budget.
    #[error("capacity exceeded: {what} needs {requested} entries, budget is {budget}")]
    Capacity {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "root bracket failure for {what}: f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e} have the same sign"
    )]
    Bracket {
        what: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Internal invariant broken, e.g. a probability outside `[0, 1]`.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("exact convolution budget exceeded ({primes} primes > {budget}); use sampling instead")]
    ConvolutionBudget { primes: usize, budget: usize },

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
