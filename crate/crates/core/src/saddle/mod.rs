//! Saddle point `α(x, y)`, the root `ξ(u)`, and the prime sums built on them.

mod alpha;
mod sums;
mod xi;

pub use alpha::{saddle_lhs, solve_alpha, solve_alpha_log, SaddlePoint, ALPHA_TOLERANCE};
pub use sums::{
    expected_mean_prediction, local_ratios, m_sum, prime_sum_m, probe_primes, LocalRatio,
    MeanPrediction, PrimeSumReport,
};
pub use xi::{solve_xi, XiValue, XI_TOLERANCE};
