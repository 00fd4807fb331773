//! Monte Carlo draws of `S_Y`.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng`). The sample is split into a
//! fixed number of streams; stream `i` is seeded with the user seed and
//! switched to ChaCha stream `i`, so results are identical for any thread
//! count. Power sums are accumulated in integers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ensemble::BernoulliEnsemble;
use super::poisson_binomial::PoissonBinomialDist;

pub const STREAMS: u64 = 64;

/// Highest power sum kept (`s^4` summed over 10^9 draws of `s <= 10^5` fits
/// in 128 bits).
pub const SAMPLE_MOMENTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleMoments {
    pub n_samples: u64,
    pub seed: u64,
    /// `Σ s^j` for `j = 0..=4`.
    pub power_sums: [u128; SAMPLE_MOMENTS + 1],
}

impl SampleMoments {
    /// Sample estimate of `E[S^j]`.
    pub fn raw(&self, j: usize) -> f64 {
        self.power_sums[j] as f64 / self.n_samples as f64
    }

    pub fn mean(&self) -> f64 {
        self.raw(1)
    }
}

pub fn sample_s(e: &BernoulliEnsemble, n_samples: u64, seed: u64) -> SampleMoments {
    assert!(n_samples >= 1, "need at least one sample");
    let per = n_samples.div_ceil(STREAMS);
    let probs = e.probs();
    let power_sums = (0..STREAMS)
        .into_par_iter()
        .map(|stream| {
            let start = stream * per;
            let count = per.min(n_samples.saturating_sub(start));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut sums = [0u128; SAMPLE_MOMENTS + 1];
            for _ in 0..count {
                let s = probs.iter().filter(|&&q| rng.random::<f64>() < q).count() as u128;
                let mut pw = 1u128;
                for slot in sums.iter_mut() {
                    *slot += pw;
                    pw *= s;
                }
            }
            sums
        })
        .reduce(
            || [0u128; SAMPLE_MOMENTS + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    SampleMoments {
        n_samples,
        seed,
        power_sums,
    }
}

/// Sample moments against the exact law, in units of standard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCheck {
    /// `(sample − exact) / SE` for `E[S^j]`, `j = 1..=4`; 0 when `SE = 0`
    /// and the values agree.
    pub z_scores: Vec<f64>,
    /// The sample mean sits more than five standard errors from the exact
    /// mean. Expected about once in 10^6 runs, so it is reported, not fatal.
    pub mean_outlier: bool,
}

pub fn compare_with_exact(sample: &SampleMoments, exact: &PoissonBinomialDist) -> SampleCheck {
    let n = sample.n_samples as f64;
    let raw = |j: u32| exact.moment_about(crate::dd::Dd::ZERO, j).to_f64();
    let z_scores: Vec<f64> = (1..=SAMPLE_MOMENTS as u32)
        .map(|j| {
            let var = raw(2 * j) - raw(j).powi(2);
            let se = (var.max(0.0) / n).sqrt();
            let diff = sample.raw(j as usize) - raw(j);
            if se == 0.0 {
                if diff.abs() <= 1e-9 * raw(j).abs().max(1.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                diff / se
            }
        })
        .collect();
    SampleCheck {
        mean_outlier: z_scores[0].abs() > 5.0,
        z_scores,
    }
}
