//! Exact statistics of the prime-divisor count `ω(n)` over y-smooth and
//! y-ultra-smooth integers, together with the saddle-point machinery and the
//! independent Bernoulli model used to study their limiting normal law.
//!
//! The crate is organised bottom-up:
//!
//! * [`sieve`]: primes, largest-prime-factor tables, exact counts of
//!   `Ψ(x,y)` and `Υ(x,y)`, and joint `(ω, ω_Y)` histograms of a population.
//! * [`saddle`]: the roots `ξ(u)` and `α(x,y)` and the prime sums `M(t)`.
//! * [`model`]: the independent indicator model, its exact Poisson-binomial
//!   law, Monte Carlo sampling and the moment-boundedness constant.
//! * [`stats`]: empirical moments, normal CDF, KS distances and moment gaps.
//! * [`thresholds`]: every frozen numeric threshold used by the checks.

pub mod dd;
pub mod error;
pub mod model;
pub mod saddle;
pub mod sieve;
pub mod stats;
pub mod thresholds;

pub use error::{Error, Result};
pub use sieve::SmoothContext;

/// Library version, recorded with every stored result.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
