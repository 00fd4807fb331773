use serde::Serialize;

use crate::dd::Dd;
use crate::sieve::{PsiCounter, SmoothContext};

/// `M(t) = Σ_{p<=t} p^{−α}` together with the comparison targets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrimeSumReport {
    pub t: u64,
    pub alpha: f64,
    pub m_t: f64,
    /// `π(t)`
    pub prime_count: usize,
    /// `log log y + u·y / (y + log x)`
    pub lemma41_target: f64,
    /// `log log y + u`
    pub sumybig_target: f64,
    /// `log log t`
    pub loglog_t_target: f64,
    /// `log log y − log φ(y)`
    pub trunc_target: f64,
}

/// Exact finite sum `Σ_{p<=t} p^{−α}` in double-double.
pub fn m_sum(t: u64, alpha: f64, primes: &[u64]) -> f64 {
    primes
        .iter()
        .take_while(|&&p| p <= t)
        .map(|&p| Dd::new((-alpha * (p as f64).ln()).exp()))
        .sum::<Dd>()
        .to_f64()
}

pub fn prime_sum_m(ctx: &SmoothContext, t: u64, alpha: f64, primes: &[u64]) -> PrimeSumReport {
    let prime_count = primes.partition_point(|&p| p <= t);
    let ll_y = ctx.loglog_y();
    let y = ctx.y as f64;
    PrimeSumReport {
        t,
        alpha,
        m_t: m_sum(t, alpha, primes),
        prime_count,
        lemma41_target: ll_y + ctx.u * y / (y + ctx.log_x()),
        sumybig_target: ll_y + ctx.u,
        loglog_t_target: (t as f64).ln().ln(),
        trunc_target: ll_y - ctx.phi_y.ln(),
    }
}

/// Predictions for the mean of `ω` over `S(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanPrediction {
    /// `M(y)`, accurate to `O(1)`.
    pub m_y: f64,
    /// `log log y + u`
    pub loglog_y_plus_u: f64,
}

pub fn expected_mean_prediction(ctx: &SmoothContext, alpha: f64, primes: &[u64]) -> MeanPrediction {
    MeanPrediction {
        m_y: m_sum(ctx.y, alpha, primes),
        loglog_y_plus_u: ctx.loglog_y() + ctx.u,
    }
}

/// One probe of `Ψ(x/d, y) ≈ Ψ(x, y) / d^α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalRatio {
    pub d: u64,
    /// `Ψ(⌊x/d⌋, y) · d^α / Ψ(x, y)`
    pub ratio: f64,
    /// `1/u_y + log d / log x`
    pub scale: f64,
    /// `|ratio − 1| / scale`: the constant this probe needs.
    pub needed_k: f64,
}

impl LocalRatio {
    pub fn within(&self, k: f64) -> bool {
        (self.ratio - 1.0).abs() <= k * self.scale
    }
}

pub fn local_ratios(
    ctx: &SmoothContext,
    alpha: f64,
    divisors: &[u64],
    counter: &mut PsiCounter,
) -> Vec<LocalRatio> {
    let psi = counter.psi(ctx.x, ctx.y) as f64;
    let inv_uy = 1.0 / ctx.u_y;
    divisors
        .iter()
        .map(|&d| {
            let ld = (d as f64).ln();
            let ratio = counter.psi(ctx.x / d, ctx.y) as f64 * (alpha * ld).exp() / psi;
            let scale = inv_uy + ld / ctx.log_x();
            LocalRatio {
                d,
                ratio,
                scale,
                needed_k: (ratio - 1.0).abs() / scale,
            }
        })
        .collect()
}

/// `count` primes `<= y`, spread evenly on a log scale: the largest prime
/// not exceeding `y^{i/count}` for `i = 1..=count`, deduplicated.
pub fn probe_primes(y: u64, count: usize, primes: &[u64]) -> Vec<u64> {
    let primes = &primes[..primes.partition_point(|&p| p <= y)];
    let ly = (y as f64).ln();
    let mut out: Vec<u64> = (1..=count)
        .filter_map(|i| {
            let target = (ly * i as f64 / count as f64).exp();
            let k = primes.partition_point(|&p| p as f64 <= target * (1.0 + 1e-12));
            (k > 0).then(|| primes[k - 1])
        })
        .collect();
    out.dedup();
    // Top up from the largest primes when small targets collapse onto 2, 3, ...
    let mut extra = primes.iter().rev();
    while out.len() < count.min(primes.len()) {
        if let Some(&p) = extra.next() {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out
}
