use serde::Serialize;

use super::xi::{solve_xi, XiValue};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::sieve::SmoothContext;

/// Residual tolerance relative to `log x`.
pub const ALPHA_TOLERANCE: f64 = 1e-10;

const BRACKET: (f64, f64) = (1e-6, 2.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SaddlePoint {
    pub alpha: f64,
    /// `|Σ_{p<=y} log p / (p^α − 1) − log x|` at `alpha`.
    pub residual: f64,
    /// `1 − ξ(u) / log y`.
    pub alpha_approx: f64,
    pub xi: XiValue,
    pub log_x: f64,
    pub y: u64,
}

impl SaddlePoint {
    pub fn approx_gap(&self) -> f64 {
        (self.alpha - self.alpha_approx).abs()
    }
}

/// `Σ log p / (p^α − 1)` over `primes`, in double-double.
pub fn saddle_lhs(alpha: f64, primes: &[u64]) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let lp = (p as f64).ln();
            Dd::new(lp / (alpha * lp).exp_m1())
        })
        .sum::<Dd>()
        .to_f64()
}

fn saddle_lhs_derivative(alpha: f64, primes: &[u64]) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let lp = (p as f64).ln();
            let e = (alpha * lp).exp_m1();
            Dd::new(-lp * lp * (e + 1.0) / (e * e))
        })
        .sum::<Dd>()
        .to_f64()
}

/// Saddle point `α(x, y)`: the root of `Σ_{p<=y} log p / (p^α − 1) = log x`.
///
/// `primes` must list the primes up to `y`; entries above `y` are ignored.
pub fn solve_alpha(ctx: &SmoothContext, primes: &[u64]) -> Result<SaddlePoint> {
    let primes = &primes[..primes.partition_point(|&p| p <= ctx.y)];
    solve_alpha_log(ctx.log_x(), ctx.y, primes)
}

/// As [`solve_alpha`], from `log x` directly (for `x` beyond 64 bits).
pub fn solve_alpha_log(log_x: f64, y: u64, primes: &[u64]) -> Result<SaddlePoint> {
    let f = |a: f64| saddle_lhs(a, primes) - log_x;
    let (mut lo, mut hi) = BRACKET;
    let (f_lo, f_hi) = (f(lo), f(hi));
    // The left side decreases from +∞ at 0⁺ towards 0.
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::Bracket {
            what: "alpha",
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tol = ALPHA_TOLERANCE * log_x;
    let mut alpha = 0.5 * (lo + hi);
    let mut fa = f(alpha);
    for _ in 0..100 {
        if fa.abs() <= 1e-3 * tol {
            break;
        }
        if fa > 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let mut next = alpha - fa / saddle_lhs_derivative(alpha, primes);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == alpha {
            break;
        }
        alpha = next;
        fa = f(alpha);
    }
    let residual = fa.abs();
    if residual > tol {
        return Err(Error::Consistency(format!(
            "alpha solver stalled at {alpha} with residual {residual:e} > {tol:e}"
        )));
    }
    let log_y = (y as f64).ln();
    let u = (log_x / log_y).max(1.0);
    let xi = solve_xi(u)?;
    Ok(SaddlePoint {
        alpha,
        residual,
        alpha_approx: 1.0 - xi.xi / log_y,
        xi,
        log_x,
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes_up_to;

    #[test]
    fn residual_within_tolerance() {
        let primes = primes_up_to(100_000);
        for &(x, y) in &[(1_000_000u64, 1000u64), (100_000_000, 10_000), (10, 2), (1000, 1000)] {
            let ctx = SmoothContext::new(x, y).unwrap();
            let s = solve_alpha(&ctx, &primes).unwrap();
            let direct = (saddle_lhs(s.alpha, primes_up_to(y).as_slice()) - ctx.log_x()).abs();
            assert!(direct <= ALPHA_TOLERANCE * ctx.log_x(), "x={x} y={y}: {direct:e}");
            assert!(s.alpha > 0.0 && s.alpha < 2.0);
        }
    }

    #[test]
    fn single_prime_closed_form() {
        // y = 2: log 2 / (2^α − 1) = log x  =>  α = log2(1 + log 2 / log x).
        let ctx = SmoothContext::new(1000, 2).unwrap();
        let s = solve_alpha(&ctx, &[2]).unwrap();
        let exact = (1.0 + 2f64.ln() / 1000f64.ln()).log2();
        assert!((s.alpha - exact).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_x_and_y() {
        let primes = primes_up_to(10_000);
        let mut prev = f64::INFINITY;
        for e in 4..=12 {
            let ctx = SmoothContext::new(10u64.pow(e), 10_000).unwrap();
            let a = solve_alpha(&ctx, &primes).unwrap().alpha;
            assert!(a < prev);
            prev = a;
        }
        let mut prev = 0.0;
        for y in [100u64, 300, 1000, 3000, 10_000] {
            let ctx = SmoothContext::new(1_000_000_000, y).unwrap();
            let a = solve_alpha(&ctx, &primes).unwrap().alpha;
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn empty_prime_list_is_bracket_failure() {
        let ctx = SmoothContext::new(100, 10).unwrap();
        assert!(matches!(solve_alpha(&ctx, &[]), Err(Error::Bracket { .. })));
    }

    #[test]
    fn pure_and_repeatable() {
        let primes = primes_up_to(1000);
        let ctx = SmoothContext::new(1_000_000, 1000).unwrap();
        let a = solve_alpha(&ctx, &primes).unwrap();
        let b = solve_alpha(&ctx, &primes).unwrap();
        assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
    }
}
