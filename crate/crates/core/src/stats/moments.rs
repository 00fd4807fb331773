//! Weighted moment accumulation over discrete populations.
//!
//! Populations arrive as `(value, weight)` atoms: integer counts for sieve
//! populations, probabilities for the model. Powers are taken of
//! `value − shift` with the shift fixed at the first atom, and all sums are
//! double-double.

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::model::PoissonBinomialDist;
use crate::sieve::{populations, PopulationEngine, SieveConfig, SmoothContext};

/// Which population a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Population {
    Smooth,
    Ultra,
    Model,
}

/// How `ω` is standardised before comparing with `Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Standardization {
    /// `(ω − log log y) / √(log log y)`
    Paper,
    /// `(ω − μ) / σ`
    Empirical,
}

/// Shifted power sums `Σ w (v − shift)^j`, `j = 0..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentAccumulator {
    shift: Option<f64>,
    sums: Vec<Dd>,
}

impl MomentAccumulator {
    pub fn new(max_order: usize) -> Self {
        MomentAccumulator {
            shift: None,
            sums: vec![Dd::ZERO; max_order + 1],
        }
    }

    pub fn max_order(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn add(&mut self, value: f64, weight: Dd) {
        let shift = *self.shift.get_or_insert(value);
        let d = Dd::new(value) - shift;
        let mut pw = weight;
        for s in self.sums.iter_mut() {
            *s += pw;
            pw = pw * d;
        }
    }

    pub fn add_count(&mut self, value: f64, count: u128) {
        self.add(value, Dd::from_u128(count));
    }

    /// Combines two accumulators; the result keeps `self`'s shift.
    pub fn merge(mut self, other: &MomentAccumulator) -> Self {
        assert_eq!(self.sums.len(), other.sums.len(), "moment orders differ");
        let Some(theirs) = other.shift else {
            return self;
        };
        let mine = *self.shift.get_or_insert(theirs);
        // Σ w (v − a)^j = Σ_i C(j, i) (b − a)^{j−i} Σ w (v − b)^i
        let delta = Dd::new(theirs) - mine;
        for j in 0..self.sums.len() {
            let mut binom = 1.0;
            let mut acc = Dd::ZERO;
            for i in (0..=j).rev() {
                acc += other.sums[i] * delta.powi((j - i) as u32) * binom;
                binom = binom * i as f64 / (j - i + 1) as f64;
            }
            self.sums[j] += acc;
        }
        self
    }

    pub fn total_weight(&self) -> Dd {
        self.sums[0]
    }

    pub fn mean(&self) -> Dd {
        match self.shift {
            Some(s) => self.sums[1] / self.sums[0] + s,
            None => Dd::ZERO,
        }
    }

    /// `E[(v − c)^j]` for `j = 0..=K`.
    pub fn moments_about(&self, center: Dd) -> Vec<Dd> {
        let k = self.max_order();
        let Some(shift) = self.shift else {
            return vec![Dd::ZERO; k + 1];
        };
        let n = self.sums[0];
        let e = (0..=k).map(|j| self.sums[j] / n).collect::<Vec<_>>();
        let delta = Dd::new(shift) - center;
        (0..=k)
            .map(|j| {
                let mut binom = 1.0;
                let mut acc = Dd::ZERO;
                for i in 0..=j {
                    acc += e[i] * delta.powi((j - i) as u32) * binom;
                    binom = binom * (j - i) as f64 / (i + 1) as f64;
                }
                acc
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub population: Population,
    /// Population size: `Ψ` or `Υ` for sieve populations, 1 for the model.
    pub count: u128,
    pub mean: f64,
    pub variance: f64,
    /// `E[v^k]`
    pub raw: Vec<f64>,
    /// `E[(v − μ)^k]`
    pub central: Vec<f64>,
    /// `E[((v − log log y) / √(log log y))^k]`
    pub paper_standardized: Vec<f64>,
    /// `E[((v − μ) / σ)^k]`; empty when `σ = 0`.
    pub empirical_standardized: Vec<f64>,
    pub loglog_y: f64,
}

impl MomentReport {
    pub fn from_accumulator(
        population: Population,
        count: u128,
        acc: &MomentAccumulator,
        loglog_y: f64,
    ) -> Self {
        let mean = acc.mean();
        let raw: Vec<f64> = acc.moments_about(Dd::ZERO).iter().map(|d| d.to_f64()).collect();
        let central_dd = acc.moments_about(mean);
        let central: Vec<f64> = central_dd.iter().map(|d| d.to_f64()).collect();
        let variance = central.get(2).copied().unwrap_or(0.0).max(0.0);
        let scale_paper = loglog_y.sqrt();
        let paper_standardized = acc
            .moments_about(Dd::new(loglog_y))
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_f64() / scale_paper.powi(k as i32))
            .collect();
        let empirical_standardized = if variance > 0.0 {
            let sd = variance.sqrt();
            central
                .iter()
                .enumerate()
                .map(|(k, m)| m / sd.powi(k as i32))
                .collect()
        } else {
            Vec::new()
        };
        MomentReport {
            population,
            count,
            mean: mean.to_f64(),
            variance,
            raw,
            central,
            paper_standardized,
            empirical_standardized,
            loglog_y,
        }
    }

    /// From an integer histogram `(value, count)`.
    pub fn from_counts(
        population: Population,
        values: &[(i64, u128)],
        max_order: usize,
        loglog_y: f64,
    ) -> Self {
        let mut acc = MomentAccumulator::new(max_order);
        for &(v, c) in values {
            acc.add_count(v as f64, c);
        }
        let count = values.iter().map(|&(_, c)| c).sum();
        Self::from_accumulator(population, count, &acc, loglog_y)
    }

    /// From the exact law of `S_Y`.
    pub fn from_model(dist: &PoissonBinomialDist, max_order: usize, loglog_y: f64) -> Self {
        let mut acc = MomentAccumulator::new(max_order);
        for (v, w) in dist.atoms() {
            acc.add(v, Dd::new(w));
        }
        Self::from_accumulator(Population::Model, 1, &acc, loglog_y)
    }

    /// Standardised moments under the chosen standardisation.
    pub fn standardized(&self, s: Standardization) -> &[f64] {
        match s {
            Standardization::Paper => &self.paper_standardized,
            Standardization::Empirical => &self.empirical_standardized,
        }
    }
}

/// Moments of `ω_t` over `S(x, y)` (or `U(x, y)`), where `t` replaces the
/// context's truncation point; `t = y` gives `ω` itself.
pub fn empirical_moments(
    population: Population,
    ctx: &SmoothContext,
    t: u64,
    max_order: usize,
    engine: PopulationEngine,
    cfg: &SieveConfig,
) -> Result<MomentReport> {
    let hist = match population {
        Population::Model => {
            return Err(Error::InvalidParams(
                "model moments come from MomentReport::from_model".into(),
            ))
        }
        Population::Smooth | Population::Ultra => {
            let mut c = *ctx;
            c.big_y = t.clamp(1, ctx.y);
            let pops = populations(&c, engine, cfg)?;
            if population == Population::Smooth {
                pops.smooth
            } else {
                pops.ultra
            }
        }
    };
    Ok(MomentReport::from_counts(
        population,
        &hist.omega_y_marginal(),
        max_order,
        ctx.loglog_y(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_10_2() {
        let ctx = SmoothContext::new(10, 2).unwrap();
        let r = empirical_moments(
            Population::Smooth,
            &ctx,
            2,
            4,
            PopulationEngine::Scan,
            &SieveConfig::default(),
        )
        .unwrap();
        assert_eq!(r.count, 4);
        assert_eq!(r.mean, 0.75);
        assert!((r.variance - 0.1875).abs() < 1e-16);
        assert!(r.central[1].abs() < 1e-16);
    }

    #[test]
    fn merge_matches_single_pass() {
        let data: Vec<(f64, u128)> = (0..40).map(|i| ((i * 7 % 11) as f64, (i % 5 + 1) as u128)).collect();
        let mut whole = MomentAccumulator::new(6);
        let mut a = MomentAccumulator::new(6);
        let mut b = MomentAccumulator::new(6);
        for (i, &(v, c)) in data.iter().enumerate() {
            whole.add_count(v, c);
            if i < 17 { a.add_count(v, c) } else { b.add_count(v, c) }
        }
        let merged = a.merge(&b);
        let m1 = whole.moments_about(whole.mean());
        let m2 = merged.moments_about(merged.mean());
        for (x, y) in m1.iter().zip(&m2) {
            assert!((x.to_f64() - y.to_f64()).abs() <= 1e-20 + 1e-25 * x.to_f64().abs());
        }
    }

    #[test]
    fn model_coin() {
        let dist = PoissonBinomialDist::from_pmf(vec![0.5, 0.5]);
        let r = MomentReport::from_model(&dist, 4, 1.0);
        assert_eq!(r.mean, 0.5);
        assert_eq!(r.variance, 0.25);
        assert_eq!(r.empirical_standardized[4], 1.0);
    }

    #[test]
    fn constant_population_has_no_empirical_standardisation() {
        let r = MomentReport::from_counts(Population::Smooth, &[(3, 10)], 4, 1.0);
        assert_eq!(r.variance, 0.0);
        assert!(r.empirical_standardized.is_empty());
        assert_eq!(r.paper_standardized[2], 4.0);
    }
}
