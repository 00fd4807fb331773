use serde_json::json;
use smoothek::model::{compare_modes, exact_distribution, BernoulliEnsemble};
use smoothek::saddle::{local_ratios, prime_sum_m, probe_primes, solve_alpha};
use smoothek::sieve::{populations, primes_up_to, PsiCounter, SieveConfig};
use smoothek::stats::{ek_distribution, moment_gaps, Population, Standardization};
use smoothek::thresholds as th;

use super::{context, engine, max_y, model_ensemble, Result};
use crate::args::Mode;
use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Status, Table};

const PROBES: usize = 30;

pub fn run(cfg: &ExperimentConfig, alpha_shift: f64) -> Result<Report> {
    let primes = primes_up_to(max_y(cfg));
    let sieve = SieveConfig::default();
    let mut counter = PsiCounter::new();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &p in &cfg.points {
        let ctx = context(cfg, p)?;
        let (x, y) = (p.x, p.y);
        let saddle = solve_alpha(&ctx, &primes)?;
        let alpha = saddle.alpha + alpha_shift;

        let at_y = prime_sum_m(&ctx, y, alpha, &primes);
        let at_big_y = prime_sum_m(&ctx, ctx.big_y, alpha, &primes);
        let sumybig = (at_y.m_t - at_y.sumybig_target).abs();
        let lemma41 = (at_y.m_t - at_y.lemma41_target).abs();
        checks.push(Check::at("sumybig", x, y).at_most(sumybig, th::SUMYBIG_GAP));
        checks.push(Check::at("lemma41", x, y).at_most(lemma41, th::LEMMA41_GAP));

        let truncation = (at_big_y.m_t - at_big_y.trunc_target).abs();
        checks.push(if ctx.phi_y > 1.0 {
            Check::at("truncation", x, y).at_most(truncation, th::TRUNCATION_GAP)
        } else {
            Check::at("truncation", x, y)
                .detail("phi(y) = 1 for y <= e^e, so Y = y and nothing is truncated")
                .status(Status::NotApplicable)
        });
        let loglog_t = (at_big_y.m_t - at_big_y.loglog_t_target).abs();
        checks.push(if ctx.big_y >= 3 {
            Check::at("loglog_t", x, y).at_most(loglog_t, th::LOGLOG_T_GAP)
        } else {
            Check::at("loglog_t", x, y)
                .detail("log log t is negative at t = 2")
                .status(Status::NotApplicable)
        });

        let hist = populations(&ctx, engine(cfg, x), &sieve)?;
        let ek = ek_distribution(&ctx, &hist.smooth, Population::Smooth, Standardization::Paper, cfg.moments.max(2));
        let mean_gap = (ek.moments.mean - at_y.m_t).abs();
        checks.push(Check::at("mean", x, y).at_most(mean_gap, th::MEAN_GAP));
        checks.push(match &ek.tail {
            Some(t) => Check::at("tail", x, y)
                .detail(format!(
                    "P(h > {}) with E h = {}; Chebyshev sigma_h^2/eps^2 = {} (holds: {}); P(|h - E h| >= eps) = {}",
                    num(t.epsilon),
                    num(t.mean_h),
                    num(t.chebyshev_bound),
                    t.holds,
                    num(t.deviation_fraction)
                ))
                .at_most(t.fraction_above, th::TAIL_FRACTION_MAX),
            None => Check::at("tail", x, y)
                .detail("log log y <= 0")
                .status(Status::NotApplicable),
        });

        let probes = probe_primes(y, PROBES, &primes);
        let ratios = local_ratios(&ctx, alpha, &probes, &mut counter);
        let needed_k = ratios.iter().map(|r| r.needed_k).fold(0.0, f64::max);
        checks.push(
            Check::at("local_ratio", x, y)
                .detail(format!("largest |ratio - 1| / scale over {} primes d <= y", probes.len()))
                .at_most(needed_k, th::LOCAL_RATIO_K),
        );

        let exact = BernoulliEnsemble::exact(&ctx, &primes, &mut counter)?;
        let approx = BernoulliEnsemble::approximate(ctx.big_y, alpha, &primes)?;
        let mode_k = compare_modes(&ctx, &exact, &approx)
            .iter()
            .map(|g| g.relative_gap.abs() / g.scale)
            .fold(0.0, f64::max);
        checks.push(
            Check::at("mode_gap", x, y)
                .detail("largest |q_exact / p^-alpha - 1| / scale over p <= Y")
                .at_most(mode_k, th::MODE_GAP_K),
        );

        let xi = saddle.xi;
        let xi_rel = xi
            .xi_asymptotic
            .map(|a| (xi.xi - a).abs() / a.abs());
        checks.push(match xi_rel {
            Some(rel) if xi.asymptotic_applies() => {
                let limit = if xi.u >= 100.0 {
                    th::XI_ASYMPTOTIC_REL
                } else {
                    th::XI_ASYMPTOTIC_REL_FROM_3
                };
                Check::at("xi_asymptotic", x, y).at_most(rel, limit)
            }
            _ => Check::at("xi_asymptotic", x, y)
                .detail(format!("needs u >= 3, have u = {}", num(ctx.u)))
                .status(Status::NotApplicable),
        });

        let ll = ctx.loglog_y();
        let order = cfg.moments.max(4);
        let gaps = if cfg.mode == Mode::Exact && ll > 0.0 {
            let model = model_ensemble(cfg, &ctx, &primes, None, &mut counter)?;
            let dist = exact_distribution(&model, order)?;
            Some(moment_gaps(&hist.smooth.omega_y_marginal(), &dist, order, ll))
        } else {
            None
        };
        checks.push(match &gaps {
            Some(g) => {
                let worst = g
                    .normalized
                    .iter()
                    .zip(th::DELTA_NORMALIZED_MAX)
                    .map(|(v, lim)| v.abs() / lim)
                    .fold(0.0, f64::max);
                Check::at("moment_gaps", x, y)
                    .detail(format!(
                        "largest |Delta^k| / (log log y)^(k/2) as a fraction of its limit, k <= 4; normalized = [{}]",
                        g.normalized.iter().take(5).map(|v| num(*v)).collect::<Vec<_>>().join(", ")
                    ))
                    .at_most(worst, 1.0)
            }
            None => Check::at("moment_gaps", x, y)
                .detail("the frozen limits are for exact-mode probabilities")
                .status(Status::NotApplicable),
        });

        rows.push(json!({
            "x": x,
            "y": y,
            "u": ctx.u,
            "big_y": ctx.big_y,
            "alpha": alpha,
            "alpha_shift": alpha_shift,
            "m_y": at_y.m_t,
            "sumybig_target": at_y.sumybig_target,
            "lemma41_target": at_y.lemma41_target,
            "m_big_y": at_big_y.m_t,
            "trunc_target": at_big_y.trunc_target,
            "loglog_t_target": at_big_y.loglog_t_target,
            "mean_omega": ek.moments.mean,
            "tail": ek.tail,
            "local_ratio_needed_k": needed_k,
            "mode_gap_needed_k": mode_k,
            "xi": xi,
            "xi_relative_gap": xi_rel,
            "moment_gaps": gaps,
        }));
    }

    let mut table = Table::new(&["check", "x", "y", "status", "value", "limit"]);
    for c in &checks {
        table.push(vec![
            c.name.clone(),
            c.x.map_or("-".into(), |v| v.to_string()),
            c.y.map_or("-".into(), |v| v.to_string()),
            c.status.label().to_string(),
            c.value.map_or("-".into(), num),
            c.limit.map_or("-".into(), num),
        ]);
    }
    Ok(Report {
        command: "lemmas",
        results: json!({ "points": rows }),
        table,
        checks,
    })
}
