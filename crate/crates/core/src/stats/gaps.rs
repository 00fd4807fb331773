use serde::Serialize;

use crate::dd::Dd;
use crate::model::PoissonBinomialDist;

/// Moment gaps between `ω_Y` on `S(x, y)` and the model sum `S_Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentGaps {
    /// `μ_{ω_Y}(x, y)`, the common centre for both variables.
    pub center: f64,
    /// `A_j = E[ω_Y^j] − E[S_Y^j]`, `j = 0..=K`.
    pub a: Vec<f64>,
    /// `E[(ω_Y − μ)^k] − E[(S_Y − μ)^k]`
    pub delta_direct: Vec<f64>,
    /// `Σ_j C(k, j) (−μ)^{k−j} A_j`
    pub delta_binomial: Vec<f64>,
    /// `|direct − binomial| / max(|direct|, |binomial|, 10^{-16} m_k)` where
    /// `m_k` is the combined absolute `k`-th moment about the centre.
    pub relative_error: Vec<f64>,
    /// `|Δ^k| / (log log y)^{k/2}`; empty when `log log y <= 0`.
    pub normalized: Vec<f64>,
}

impl MomentGaps {
    pub fn max_relative_error(&self) -> f64 {
        self.relative_error.iter().copied().fold(0.0, f64::max)
    }
}

fn counts_moment(values: &[(i64, u128)], center: Dd, j: u32, absolute: bool) -> Dd {
    let n: u128 = values.iter().map(|&(_, c)| c).sum();
    let s: Dd = values
        .iter()
        .map(|&(v, c)| {
            let d = (Dd::from_i64(v) - center).powi(j);
            let d = if absolute { d.abs() } else { d };
            d * Dd::from_u128(c)
        })
        .sum();
    s / Dd::from_u128(n)
}

fn model_abs_moment(dist: &PoissonBinomialDist, center: Dd, j: u32) -> Dd {
    dist.pmf
        .iter()
        .enumerate()
        .map(|(k, &w)| (Dd::from_u128(k as u128) - center).powi(j).abs() * w)
        .sum()
}

/// `omega_y`: the `(ω_Y, count)` histogram over `S(x, y)`.
pub fn moment_gaps(
    omega_y: &[(i64, u128)],
    dist: &PoissonBinomialDist,
    max_order: usize,
    loglog_y: f64,
) -> MomentGaps {
    let mu = counts_moment(omega_y, Dd::ZERO, 1, false);
    let a: Vec<Dd> = (0..=max_order as u32)
        .map(|j| counts_moment(omega_y, Dd::ZERO, j, false) - dist.moment_about(Dd::ZERO, j))
        .collect();
    let mut delta_direct = Vec::new();
    let mut delta_binomial = Vec::new();
    let mut relative_error = Vec::new();
    for k in 0..=max_order as u32 {
        let direct = counts_moment(omega_y, mu, k, false) - dist.moment_about(mu, k);
        let mut binom = 1.0;
        let mut expanded = Dd::ZERO;
        for j in 0..=k {
            expanded += a[j as usize] * (-mu).powi(k - j) * binom;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let magnitude = (counts_moment(omega_y, mu, k, true) + model_abs_moment(dist, mu, k)).to_f64();
        let (d, b) = (direct.to_f64(), expanded.to_f64());
        let denom = d.abs().max(b.abs()).max(1e-16 * magnitude);
        relative_error.push(if denom == 0.0 {
            0.0
        } else {
            (direct - expanded).abs().to_f64() / denom
        });
        delta_direct.push(d);
        delta_binomial.push(b);
    }
    let normalized = if loglog_y > 0.0 {
        delta_direct
            .iter()
            .enumerate()
            .map(|(k, d)| d.abs() / loglog_y.powf(k as f64 / 2.0))
            .collect()
    } else {
        Vec::new()
    };
    MomentGaps {
        center: mu.to_f64(),
        a: a.iter().map(|d| d.to_f64()).collect(),
        delta_direct,
        delta_binomial,
        relative_error,
        normalized,
    }
}
