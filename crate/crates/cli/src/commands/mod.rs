mod count;
mod ek;
mod lemmas;
mod model;
mod saddle;
mod sums;

use std::fmt;

use serde_json::{json, Value};
use smoothek::model::BernoulliEnsemble;
use smoothek::saddle::solve_alpha;
use smoothek::sieve::{PopulationEngine, PsiCounter};
use smoothek::thresholds as th;
use smoothek::SmoothContext;

use crate::args::{Engine, Mode};
use crate::config::{ConfigError, ExperimentConfig, Point};

pub use count::run as count;
pub use ek::{run as ek, EkOptions};
pub use lemmas::run as lemmas;
pub use model::run as model;
pub use saddle::run as saddle;
pub use sums::run as sums;

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    Core(smoothek::Error),
    Io(std::io::Error),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Config(e) => e.fmt(f),
            CommandError::Core(e) => e.fmt(f),
            CommandError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

impl From<smoothek::Error> for CommandError {
    fn from(e: smoothek::Error) -> Self {
        CommandError::Core(e)
    }
}

impl From<std::io::Error> for CommandError {
    fn from(e: std::io::Error) -> Self {
        CommandError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, CommandError>;

pub(crate) fn context(cfg: &ExperimentConfig, p: Point) -> Result<SmoothContext> {
    Ok(SmoothContext::with_trunc_exponent(p.x, p.y, cfg.trunc_exponent)?)
}

pub(crate) fn engine(cfg: &ExperimentConfig, x: u64) -> PopulationEngine {
    match cfg.engine {
        Engine::Auto => PopulationEngine::auto(x),
        Engine::Scan => PopulationEngine::Scan,
        Engine::Tree => PopulationEngine::Tree,
    }
}

pub(crate) fn max_y(cfg: &ExperimentConfig) -> u64 {
    cfg.points.iter().map(|p| p.y).max().unwrap_or(2)
}

/// The model ensemble over primes `<= Y` in the configured mode. `alpha`
/// replaces the solved saddle point in approximate mode.
pub(crate) fn model_ensemble(
    cfg: &ExperimentConfig,
    ctx: &SmoothContext,
    primes: &[u64],
    alpha: Option<f64>,
    counter: &mut PsiCounter,
) -> Result<BernoulliEnsemble> {
    Ok(match cfg.mode {
        Mode::Exact => BernoulliEnsemble::exact(ctx, primes, counter)?,
        Mode::Approximate => {
            let a = match alpha {
                Some(a) => a,
                None => solve_alpha(ctx, primes)?.alpha,
            };
            BernoulliEnsemble::approximate(ctx.big_y, a, primes)?
        }
    })
}

/// Points sorted by `y`, for trends along a fixed-`u` grid.
pub(crate) fn fixed_u_order(cfg: &ExperimentConfig) -> Option<Vec<usize>> {
    cfg.fixed_u?;
    let mut idx: Vec<usize> = (0..cfg.points.len()).collect();
    idx.sort_by_key(|&i| cfg.points[i].y);
    (idx.len() >= 2).then_some(idx)
}

/// Largest increase along `values` taken in the given order.
pub(crate) fn worst_increase(values: &[f64], order: &[usize]) -> f64 {
    order
        .windows(2)
        .map(|w| values[w[1]] - values[w[0]])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The frozen thresholds, stored alongside every baseline record.
pub fn thresholds() -> Value {
    json!({
        "local_ratio_k": th::LOCAL_RATIO_K,
        "mode_gap_k": th::MODE_GAP_K,
        "sumybig_gap": th::SUMYBIG_GAP,
        "lemma41_gap": th::LEMMA41_GAP,
        "truncation_gap": th::TRUNCATION_GAP,
        "loglog_t_gap": th::LOGLOG_T_GAP,
        "mean_gap": th::MEAN_GAP,
        "tail_fraction_max": th::TAIL_FRACTION_MAX,
        "delta_normalized_max": th::DELTA_NORMALIZED_MAX,
        "xi_asymptotic_rel": th::XI_ASYMPTOTIC_REL,
        "xi_asymptotic_rel_from_3": th::XI_ASYMPTOTIC_REL_FROM_3,
        "ks_trend_slack": th::KS_TREND_SLACK,
        "approx_gap_trend_slack": th::APPROX_GAP_TREND_SLACK,
        "model_ks_max": th::MODEL_KS_MAX,
        "gap_identity_rel": th::GAP_IDENTITY_REL,
        "sample_z_max": th::SAMPLE_Z_MAX,
    })
}
