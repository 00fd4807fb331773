use serde::Serialize;

use super::poisson_binomial::PoissonBinomialDist;

/// `Σ_j Σ' k! / (k_1! ⋯ k_j!)` over compositions `k_1 + ⋯ + k_j = k` with
/// every part at least 2: the constant bounding the standardised `k`-th
/// central moment of a sum of centred indicators (when the variance is at
/// least 1).
pub fn composition_bound(k: usize) -> f64 {
    // f(n) = Σ_{a=2..n} C(n, a) f(n − a), f(0) = 1.
    let mut f = vec![0.0f64; k + 1];
    f[0] = 1.0;
    for n in 2..=k {
        let mut binom = 1.0; // C(n, 0)
        let mut acc = 0.0;
        for a in 1..=n {
            binom = binom * (n - a + 1) as f64 / a as f64;
            if a >= 2 {
                acc += binom * f[n - a];
            }
        }
        f[n] = acc;
    }
    if k == 0 {
        1.0
    } else {
        f[k]
    }
}

/// Relative rounding allowance in [`MomentBound::holds`].
pub const BOUND_ROUNDING: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentBound {
    pub k: usize,
    /// `E[(S − mean)^k] / variance^{k/2}`
    pub standardized: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Standardised central moment of order `k` beside the composition bound.
pub fn centered_moment_bound(dist: &PoissonBinomialDist, k: usize) -> MomentBound {
    let central = if k < dist.central_moments.len() {
        dist.central_moments[k]
    } else {
        dist.moment_about(dist.mean_dd(), k as u32).to_f64()
    };
    let standardized = if dist.variance > 0.0 {
        central / dist.variance.powf(k as f64 / 2.0)
    } else {
        0.0
    };
    let bound = composition_bound(k);
    MomentBound {
        k,
        standardized,
        bound,
        holds: standardized.abs() <= bound * (1.0 + BOUND_ROUNDING),
    }
}

/// `E[Y^k]` for `Y = X − q`, `X ~ Bernoulli(q)`.
pub fn centered_indicator_moment(q: f64, k: u32) -> f64 {
    q * (1.0 - q).powi(k as i32) + (1.0 - q) * (-q).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Enumerates compositions directly.
    fn brute(k: usize) -> f64 {
        fn fact(n: usize) -> f64 {
            (1..=n).map(|i| i as f64).product()
        }
        fn go(rest: usize, k: usize, denom: f64, acc: &mut f64) {
            if rest == 0 {
                *acc += fact(k) / denom;
                return;
            }
            for part in 2..=rest {
                go(rest - part, k, denom * fact(part), acc);
            }
        }
        let mut acc = 0.0;
        go(k, k, 1.0, &mut acc);
        acc
    }

    #[test]
    fn small_orders() {
        assert_eq!(composition_bound(2), 1.0);
        assert_eq!(composition_bound(3), 1.0);
        assert_eq!(composition_bound(4), 7.0);
        assert_eq!(composition_bound(1), 0.0);
        for k in 2..=12 {
            assert!((composition_bound(k) - brute(k)).abs() <= 1e-9 * brute(k), "k={k}");
        }
    }

    #[test]
    fn bound_dominates_gaussian_moments() {
        for k in (2..=10).step_by(2) {
            let dfact: f64 = (1..k).step_by(2).map(|i| i as f64).product();
            assert!(composition_bound(k) >= dfact);
        }
    }

    proptest! {
        #[test]
        fn centred_indicator_moments(q in 0.0f64..=1.0, k in 2u32..12) {
            let m1 = centered_indicator_moment(q, 1);
            let m2 = centered_indicator_moment(q, 2);
            let mk = centered_indicator_moment(q, k);
            prop_assert!(m1.abs() < 1e-15);
            prop_assert!(mk.abs() <= m2 + 1e-15);
            prop_assert!(m2 <= 0.25 + 1e-15);
        }
    }
}
