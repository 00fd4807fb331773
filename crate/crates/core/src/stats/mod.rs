//! Empirical statistics of `ω` over smooth and ultra-smooth populations, and
//! their comparison with the normal law and with the independent-prime model.

mod ek;
mod gaps;
mod moments;
mod normal;

pub use ek::{
    ek_distribution, ks_against_normal, model_ks, tail_report, z_grid, CdfPoint, EkReport,
    KsSummary, SlutskyCheck, TailReport, GRID_LO, GRID_STEP, GRID_STEPS,
};
pub use gaps::{moment_gaps, MomentGaps};
pub use moments::{empirical_moments, MomentAccumulator, MomentReport, Population, Standardization};
pub use normal::{gaussian_moment, phi_cdf, phi_pdf};
