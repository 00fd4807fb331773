//! Frozen numeric thresholds for the lemma-shaped checks.
//!
//! The asymptotic statements being checked carry unspecified `O(·)`
//! constants, so each bound below was measured on pilot runs and then fixed.
//! "Pilot" values quoted are the measured quantities those runs produced; the
//! reference point is `(x, y) = (10^8, 10^4)` unless stated otherwise.

/// Constant `K` in `|Ψ(x/d, y) d^α / Ψ(x, y) − 1| <= K (1/u_y + log d / log x)`.
///
/// Pilot: 0.30 over 30 log-spaced primes at the reference point; the largest
/// need over the rows `(10^6, 10^3)`, `(10^9, 10^3)` and `(10^4, 10^4)` is
/// 0.50. Shifting `α` by `+0.1` needs at least 0.97 on every row, so the
/// check rejects a wrong saddle point.
pub const LOCAL_RATIO_K: f64 = 0.75;

/// Same constant applied to `|q_p^{exact} / p^{−α} − 1|` for `p <= Y`.
/// Pilot need: 0.105.
pub const MODE_GAP_K: f64 = LOCAL_RATIO_K;

/// `|M(y) − (log log y + u)|`. Pilot: 0.062 (`C = 0.29` in units of
/// `u / log y`); 0.63 on the `x = y` row.
pub const SUMYBIG_GAP: f64 = 1.0;

/// `|M(y) − (log log y + u y / (y + log x))|`. Pilot: 0.059; 0.63 on the
/// `x = y` row.
pub const LEMMA41_GAP: f64 = 1.0;

/// `|M(Y) − (log log y − log φ(y))|`. Pilot: 0.85; 1.40 at `(10^9, 10^3)`.
pub const TRUNCATION_GAP: f64 = 1.5;

/// `|M(t) − log log t|` at `t = Y`. Pilot: 0.86; 1.40 at `(10^9, 10^3)`.
pub const LOGLOG_T_GAP: f64 = 1.5;

/// `|μ_ω(x, y) − M(y)|`. Pilot: 0.125.
pub const MEAN_GAP: f64 = 2.0;

/// `P(ω − ω_Y > (log log y)^{1/4})` over `S(x, y)`. Pilot: 0.626; 0.362 at
/// `(10^6, 10^3)`.
pub const TAIL_FRACTION_MAX: f64 = 0.7;

/// `|Δ^k| / (log log y)^{k/2}` for exact-mode probabilities, `k = 0..=4`.
/// Pilot: 7e-16, 1e-16, 0.096, 0.099, 0.575.
pub const DELTA_NORMALIZED_MAX: [f64; 5] = [1e-9, 1e-9, 0.15, 0.15, 0.9];

/// `|ξ(u) − log(u log u)| / log(u log u)` once `u >= 100`.
pub const XI_ASYMPTOTIC_REL: f64 = 0.25;

/// The same relative gap for any `u >= 3`. It decreases in `u`: 0.596 at
/// `u = 3`, 0.276 at `u = 5`, 0.056 at `u = 100`.
pub const XI_ASYMPTOTIC_REL_FROM_3: f64 = 0.65;

/// Allowed increase of a KS distance between consecutive grid points.
pub const KS_TREND_SLACK: f64 = 0.01;

/// Allowed increase of `|α − α_approx|` between consecutive `y` at fixed `u`.
///
/// `α − α_approx` changes sign between `y = 30` and `y = 1000` (where it
/// crosses depends on `u`), so `|α − α_approx|` dips to near zero and then
/// climbs back before decreasing for good. Pilot over `u ∈ {1.5, 2, 2.5, 3}`
/// and `y` from 30 to 10^6 in half-decade steps: the largest increase is
/// 0.0038 (`u = 2.5`, `y` from 300 to 1000); beyond `y = 3000` every step
/// decreases.
pub const APPROX_GAP_TREND_SLACK: f64 = 0.005;

/// KS distance of a standardised model sum with variance at least 25.
pub const MODEL_KS_MAX: f64 = 0.05;

/// Relative band around `(k − 1)!!` for even standardised moments.
pub const EVEN_MOMENT_BAND: f64 = 0.30;

/// `|Υ/Ψ − 1|` at `(10^6, 10^3)`.
pub const ULTRA_RATIO_BAND: f64 = 0.05;

/// `|KS(U) − KS(S)|` at the same `(x, y)`.
pub const ULTRA_KS_GAP: f64 = 0.02;

/// Direct versus expanded `Δ^k`, relative.
pub const GAP_IDENTITY_REL: f64 = 1e-8;

/// Largest `|z|` for a Monte Carlo moment against the exact law.
pub const SAMPLE_Z_MAX: f64 = 3.0;
