use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::{PsiCounter, SmoothContext};

/// How the success probabilities `q_p` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbabilityMode {
    /// `q_p = Ψ(⌊x/p⌋, y) / Ψ(x, y)` from exact counts.
    Exact,
    /// `q_p = p^{−α}`.
    Approximate,
    /// Caller-supplied probabilities.
    Custom,
}

/// Independent indicators `X_p`, one per prime `p <= Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernoulliEnsemble {
    primes: Vec<u64>,
    probs: Vec<f64>,
    mode: ProbabilityMode,
}

impl BernoulliEnsemble {
    pub fn new(primes: Vec<u64>, probs: Vec<f64>, mode: ProbabilityMode) -> Result<Self> {
        if primes.len() != probs.len() {
            return Err(Error::InvalidParams(format!(
                "{} primes but {} probabilities",
                primes.len(),
                probs.len()
            )));
        }
        if let Some((p, q)) = primes
            .iter()
            .zip(&probs)
            .find(|(_, q)| !(0.0..=1.0).contains(*q))
        {
            return Err(Error::Consistency(format!(
                "probability for p = {p} is {q}, outside [0, 1]"
            )));
        }
        Ok(BernoulliEnsemble { primes, probs, mode })
    }

    /// Exact-mode ensemble over the primes `<= ctx.big_y` in `primes`.
    pub fn exact(ctx: &SmoothContext, primes: &[u64], counter: &mut PsiCounter) -> Result<Self> {
        let ps = primes_to(primes, ctx.big_y);
        let psi = counter.psi(ctx.x, ctx.y);
        let probs = ps
            .iter()
            .map(|&p| exact_probability(ctx, p, psi, counter))
            .collect();
        Self::new(ps, probs, ProbabilityMode::Exact)
    }

    /// Approximate-mode ensemble `q_p = p^{−α}` over primes `<= big_y`.
    pub fn approximate(big_y: u64, alpha: f64, primes: &[u64]) -> Result<Self> {
        let ps = primes_to(primes, big_y);
        let probs = ps.iter().map(|&p| (-alpha * (p as f64).ln()).exp()).collect();
        Self::new(ps, probs, ProbabilityMode::Approximate)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mode(&self) -> ProbabilityMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// `Ψ(⌊x/p⌋, y) / Ψ(x, y)` for a single prime, usable beyond `Y` on demand.
pub fn exact_probability(ctx: &SmoothContext, p: u64, psi_xy: u128, counter: &mut PsiCounter) -> f64 {
    counter.psi(ctx.x / p, ctx.y) as f64 / psi_xy as f64
}

fn primes_to(primes: &[u64], bound: u64) -> Vec<u64> {
    primes.iter().copied().take_while(|&p| p <= bound).collect()
}

/// Per-prime comparison of exact and approximate probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeGap {
    pub p: u64,
    pub exact: f64,
    pub approximate: f64,
    /// `exact / approximate − 1`
    pub relative_gap: f64,
    /// `1/u_y + log p / log x`
    pub scale: f64,
}

pub fn compare_modes(
    ctx: &SmoothContext,
    exact: &BernoulliEnsemble,
    approx: &BernoulliEnsemble,
) -> Vec<ModeGap> {
    exact
        .primes
        .iter()
        .zip(&exact.probs)
        .zip(&approx.probs)
        .map(|((&p, &qe), &qa)| ModeGap {
            p,
            exact: qe,
            approximate: qa,
            relative_gap: qe / qa - 1.0,
            scale: 1.0 / ctx.u_y + (p as f64).ln() / ctx.log_x(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes_up_to;

    #[test]
    fn everything_smooth_gives_floor_ratio() {
        let ctx = SmoothContext::with_trunc_exponent(1000, 1000, Some(1.0)).unwrap();
        let primes = primes_up_to(1000);
        let e = BernoulliEnsemble::exact(&ctx, &primes, &mut PsiCounter::new()).unwrap();
        assert_eq!(e.len(), 168);
        for (&p, &q) in e.primes().iter().zip(e.probs()) {
            assert_eq!(q, (1000 / p) as f64 / 1000.0);
        }
    }

    #[test]
    fn approximate_is_nonincreasing() {
        let primes = primes_up_to(1000);
        let e = BernoulliEnsemble::approximate(1000, 0.8, &primes).unwrap();
        assert!(e.probs().windows(2).all(|w| w[0] >= w[1]));
        assert!(e.probs().iter().all(|q| (0.0..=1.0).contains(q)));
    }

    #[test]
    fn rejects_bad_probability() {
        let err = BernoulliEnsemble::new(vec![2], vec![1.5], ProbabilityMode::Custom);
        assert!(matches!(err, Err(Error::Consistency(_))));
        assert!(BernoulliEnsemble::new(vec![2, 3], vec![0.5], ProbabilityMode::Custom).is_err());
    }

    #[test]
    fn empty_ensemble() {
        let e = BernoulliEnsemble::approximate(1, 0.9, &primes_up_to(10)).unwrap();
        assert!(e.is_empty());
    }
}
