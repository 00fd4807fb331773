//! Distance between the standardised law of `ω` and the normal law.

use serde::Serialize;

use super::gaps::MomentGaps;
use super::moments::{MomentReport, Population, Standardization};
use super::normal::{phi_cdf, phi_pdf};
use crate::dd::Dd;
use crate::model::PoissonBinomialDist;
use crate::sieve::{OmegaHistogram, SmoothContext};

/// Grid `z = −4, −3.95, …, 4`.
pub const GRID_STEPS: usize = 160;
pub const GRID_LO: f64 = -4.0;
pub const GRID_STEP: f64 = 0.05;

/// Atoms closer than this (in standard units) to a grid point count as on it.
const GRID_TIE: f64 = 1e-9;

pub fn z_grid() -> Vec<f64> {
    (0..=GRID_STEPS).map(|i| (i as f64 - 80.0) / 20.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CdfPoint {
    pub z: f64,
    pub f_emp: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsSummary {
    /// `max_grid |F_emp(z) − Φ(z)|`
    pub ks_distance: f64,
    /// Supremum over all real `z` (attained at atoms of the discrete law).
    pub ks_sup: f64,
    pub grid: Vec<CdfPoint>,
}

/// Standardises the atoms `(value, weight)` by `(v − center)/scale` and
/// measures their distribution function against `Φ`. Weights must sum to 1
/// (up to rounding); atoms must be in ascending order.
pub fn ks_against_normal(atoms: &[(f64, f64)], center: f64, scale: f64) -> KsSummary {
    assert!(scale > 0.0, "scale must be positive");
    let z: Vec<(f64, f64)> = atoms.iter().map(|&(v, w)| ((v - center) / scale, w)).collect();

    let mut ks_sup = 0.0f64;
    let mut cum = Dd::ZERO;
    for &(za, w) in &z {
        let before = cum.to_f64();
        cum += Dd::new(w);
        let p = phi_cdf(za);
        ks_sup = ks_sup.max((before - p).abs()).max((cum.to_f64() - p).abs());
    }

    let mut grid = Vec::with_capacity(GRID_STEPS + 1);
    let mut idx = 0;
    let mut cum = Dd::ZERO;
    for g in z_grid() {
        while idx < z.len() && z[idx].0 <= g + GRID_TIE {
            cum += Dd::new(z[idx].1);
            idx += 1;
        }
        grid.push(CdfPoint {
            z: g,
            f_emp: cum.to_f64(),
            phi: phi_cdf(g),
        });
    }
    let ks_distance = grid
        .iter()
        .map(|p| (p.f_emp - p.phi).abs())
        .fold(0.0, f64::max);
    KsSummary {
        ks_distance,
        ks_sup,
        grid,
    }
}

fn atoms_from_counts(values: &[(i64, u128)]) -> Vec<(f64, f64)> {
    let n: u128 = values.iter().map(|&(_, c)| c).sum();
    let n = Dd::from_u128(n);
    values
        .iter()
        .map(|&(v, c)| (v as f64, (Dd::from_u128(c) / n).to_f64()))
        .collect()
}

/// Concentration of `h = ω − ω_Y` at scale `ε = (log log y)^{1/4}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub epsilon: f64,
    /// `P(h > ε)`
    pub fraction_above: f64,
    pub mean_h: f64,
    pub variance_h: f64,
    pub second_moment_h: f64,
    /// `σ_h² / ε²`, the bound stated for `P(h > ε)`.
    pub chebyshev_bound: f64,
    /// `fraction_above <= chebyshev_bound`
    pub holds: bool,
    /// `P(|h − E h| >= ε)`, the event Chebyshev's inequality controls.
    pub deviation_fraction: f64,
    pub deviation_holds: bool,
    /// `E[h²] / ε²`, a valid bound for `P(h > ε)` since `h >= 0`.
    pub second_moment_bound: f64,
}

pub fn tail_report(h: &[(i64, u128)], loglog_y: f64) -> Option<TailReport> {
    if loglog_y <= 0.0 || h.is_empty() {
        return None;
    }
    let epsilon = loglog_y.powf(0.25);
    let m = MomentReport::from_counts(Population::Smooth, h, 2, loglog_y);
    let atoms = atoms_from_counts(h);
    let prob = |pred: &dyn Fn(f64) -> bool| -> f64 {
        atoms
            .iter()
            .filter(|(v, _)| pred(*v))
            .map(|&(_, w)| Dd::new(w))
            .sum::<Dd>()
            .to_f64()
    };
    let fraction_above = prob(&|v| v > epsilon);
    let deviation_fraction = prob(&|v| (v - m.mean).abs() >= epsilon);
    let eps2 = epsilon * epsilon;
    let chebyshev_bound = m.variance / eps2;
    Some(TailReport {
        epsilon,
        fraction_above,
        mean_h: m.mean,
        variance_h: m.variance,
        second_moment_h: m.raw[2],
        chebyshev_bound,
        holds: fraction_above <= chebyshev_bound,
        deviation_fraction,
        deviation_holds: deviation_fraction <= chebyshev_bound,
        second_moment_bound: m.raw[2] / eps2,
    })
}

/// `KS(ω) <= KS_sup(ω_Y) + P(h > ε) + (ε / scale) φ(0)` on measured values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlutskyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EkReport {
    pub population: Population,
    pub standardization: Standardization,
    pub count: u128,
    pub center: f64,
    pub scale: f64,
    /// No spread to standardise by: zero variance, or `log log y <= 0` under
    /// the paper's standardisation.
    pub degenerate: bool,
    pub omega: Option<KsSummary>,
    /// Same measurement for `ω_Y`, standardised identically.
    pub omega_y: Option<KsSummary>,
    pub tail: Option<TailReport>,
    pub slutsky: Option<SlutskyCheck>,
    pub moments: MomentReport,
    pub gaps: Option<MomentGaps>,
}

impl EkReport {
    pub fn ks_distance(&self) -> Option<f64> {
        self.omega.as_ref().map(|k| k.ks_distance)
    }
}

pub fn ek_distribution(
    ctx: &SmoothContext,
    hist: &OmegaHistogram,
    population: Population,
    standardization: Standardization,
    max_order: usize,
) -> EkReport {
    let ll = ctx.loglog_y();
    let omega = hist.omega_marginal();
    let moments = MomentReport::from_counts(population, &omega, max_order, ll);
    let (center, scale) = match standardization {
        Standardization::Paper => (ll, if ll > 0.0 { ll.sqrt() } else { 0.0 }),
        Standardization::Empirical => (moments.mean, moments.variance.sqrt()),
    };
    let degenerate = moments.variance == 0.0 || !(scale > 0.0);
    let tail = tail_report(&hist.h_marginal(), ll);
    let (omega_ks, omega_y_ks, slutsky) = if degenerate {
        (None, None, None)
    } else {
        let w = ks_against_normal(&atoms_from_counts(&omega), center, scale);
        let wy = ks_against_normal(&atoms_from_counts(&hist.omega_y_marginal()), center, scale);
        let slutsky = tail.as_ref().map(|t| {
            let rhs = wy.ks_sup + t.fraction_above + t.epsilon / scale * phi_pdf(0.0);
            SlutskyCheck {
                lhs: w.ks_distance,
                rhs,
                holds: w.ks_distance <= rhs,
            }
        });
        (Some(w), Some(wy), slutsky)
    };
    EkReport {
        population,
        standardization,
        count: moments.count,
        center,
        scale,
        degenerate,
        omega: omega_ks,
        omega_y: omega_y_ks,
        tail,
        slutsky,
        moments,
        gaps: None,
    }
}

/// KS distance of `(S_Y − E S_Y) / sd(S_Y)` against `Φ`; `None` when the
/// model has zero variance.
pub fn model_ks(dist: &PoissonBinomialDist) -> Option<KsSummary> {
    if dist.variance <= 0.0 {
        return None;
    }
    Some(ks_against_normal(&dist.atoms(), dist.mean, dist.variance.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = z_grid();
        assert_eq!(g.len(), 161);
        assert_eq!(g[0], -4.0);
        assert_eq!(g[80], 0.0);
        assert_eq!(g[160], 4.0);
        assert!((g[1] - g[0] - GRID_STEP).abs() < 1e-15);
    }

    #[test]
    fn two_point_law() {
        // ±1 with equal mass: F jumps 0 → 1/2 at −1 and → 1 at 1.
        let k = ks_against_normal(&[(-1.0, 0.5), (1.0, 0.5)], 0.0, 1.0);
        let expected = 0.5 - phi_cdf(-1.0);
        assert!((k.ks_sup - expected).abs() < 1e-15);
        assert!(k.ks_distance <= k.ks_sup + 1e-15);
        assert!(k.grid.windows(2).all(|w| w[0].f_emp <= w[1].f_emp));
        assert_eq!(k.grid[0].f_emp, 0.0);
        assert_eq!(k.grid[160].f_emp, 1.0);
    }

    #[test]
    fn degenerate_population() {
        let ctx = SmoothContext::new(100, 20).unwrap();
        let mut h = OmegaHistogram::default();
        h.add(2, 2, 17);
        let r = ek_distribution(&ctx, &h, Population::Smooth, Standardization::Empirical, 4);
        assert!(r.degenerate);
        assert!(r.ks_distance().is_none());
    }

    #[test]
    fn tail_counts() {
        // ε = 1 when log log y = 1.
        let t = tail_report(&[(0, 2), (1, 1), (2, 1)], 1.0).unwrap();
        assert_eq!(t.fraction_above, 0.25);
        assert_eq!(t.mean_h, 0.75);
        assert!((t.variance_h - 0.6875).abs() < 1e-15);
        assert!(t.holds);
        assert_eq!(t.second_moment_h, 1.25);
    }
}
