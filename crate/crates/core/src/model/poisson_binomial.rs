//! Exact law of `S_Y = Σ X_p` by sequential convolution.

use serde::Serialize;

use super::ensemble::BernoulliEnsemble;
use crate::dd::Dd;
use crate::error::{Error, Result};

/// Largest ensemble the `O(m²)` convolution accepts.
pub const CONVOLUTION_BUDGET: usize = 100_000;

/// Default highest moment order.
pub const DEFAULT_MAX_MOMENT: usize = 10;

/// A central moment is flagged when `|Σ terms| / Σ |terms|` falls below this.
pub const CANCELLATION_FLAG: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonBinomialDist {
    /// `pmf[k] = P(S_Y = k)` for `k = 0..=m`.
    pub pmf: Vec<f64>,
    /// `Σ q_p`
    pub mean: f64,
    /// `Σ q_p (1 − q_p)`
    pub variance: f64,
    /// `E[S^j]`, `j = 0..=K`.
    pub raw_moments: Vec<f64>,
    /// `E[(S − mean)^j]`, `j = 0..=K`.
    pub central_moments: Vec<f64>,
    /// Orders whose central moment lost more than three digits to cancellation.
    pub cancellation_flagged: Vec<usize>,
    #[serde(skip)]
    mean_dd: Dd,
}

pub fn exact_distribution(e: &BernoulliEnsemble, max_moment: usize) -> Result<PoissonBinomialDist> {
    if e.len() > CONVOLUTION_BUDGET {
        return Err(Error::ConvolutionBudget {
            primes: e.len(),
            budget: CONVOLUTION_BUDGET,
        });
    }
    let pmf = convolve(e.probs());
    let mean_dd: Dd = e.probs().iter().map(|&q| Dd::new(q)).sum();
    let variance = e
        .probs()
        .iter()
        .map(|&q| Dd::new(q) * (1.0 - q))
        .sum::<Dd>()
        .to_f64();
    Ok(PoissonBinomialDist::build(pmf, mean_dd, variance, max_moment))
}

fn convolve(probs: &[f64]) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(probs.len() + 1);
    pmf.push(1.0);
    for &q in probs {
        pmf.push(0.0);
        for k in (1..pmf.len()).rev() {
            pmf[k] = pmf[k] * (1.0 - q) + pmf[k - 1] * q;
        }
        pmf[0] *= 1.0 - q;
    }
    pmf
}

impl PoissonBinomialDist {
    /// A law on `0..pmf.len()` given directly by its masses, with moments up
    /// to the default order.
    pub fn from_pmf(pmf: Vec<f64>) -> Self {
        let mean_dd: Dd = pmf
            .iter()
            .enumerate()
            .map(|(k, &w)| Dd::from_u128(k as u128) * w)
            .sum();
        let mut dist = Self::build(pmf, mean_dd, 0.0, DEFAULT_MAX_MOMENT);
        dist.variance = dist.central_moments[2];
        dist
    }

    fn build(pmf: Vec<f64>, mean_dd: Dd, variance: f64, max_moment: usize) -> Self {
        let mut dist = PoissonBinomialDist {
            pmf,
            mean: mean_dd.to_f64(),
            variance,
            raw_moments: Vec::new(),
            central_moments: Vec::new(),
            cancellation_flagged: Vec::new(),
            mean_dd,
        };
        dist.raw_moments = (0..=max_moment)
            .map(|j| dist.moment_about(Dd::ZERO, j as u32).to_f64())
            .collect();
        for j in 0..=max_moment {
            let (value, ratio) = dist.central_with_cancellation(j as u32);
            dist.central_moments.push(value);
            if ratio < CANCELLATION_FLAG {
                dist.cancellation_flagged.push(j);
            }
        }
        dist
    }

    /// `E[(S − c)^j]` in double-double.
    pub fn moment_about(&self, center: Dd, j: u32) -> Dd {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(k, &w)| (Dd::from_u128(k as u128) - center).powi(j) * w)
            .sum()
    }

    pub fn mean_dd(&self) -> Dd {
        self.mean_dd
    }

    fn central_with_cancellation(&self, j: u32) -> (f64, f64) {
        let mut signed = Dd::ZERO;
        let mut absolute = Dd::ZERO;
        for (k, &w) in self.pmf.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let t = (Dd::from_u128(k as u128) - self.mean_dd).powi(j) * w;
            signed += t;
            absolute += t.abs();
        }
        let ratio = if absolute.to_f64() == 0.0 {
            1.0
        } else {
            (signed.to_f64() / absolute.to_f64()).abs()
        };
        (signed.to_f64(), ratio)
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    pub fn pmf_total(&self) -> f64 {
        self.pmf.iter().map(|&w| Dd::new(w)).sum::<Dd>().to_f64()
    }

    /// `(value, probability)` atoms with nonzero mass.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(k, &w)| (k as f64, w))
            .collect()
    }
}
