use serde_json::json;
use smoothek::model::{
    centered_indicator_moment, centered_moment_bound, compare_with_exact, exact_distribution, sample_s,
};
use smoothek::sieve::{primes_up_to, PsiCounter};
use smoothek::stats::model_ks;
use smoothek::thresholds as th;

use super::{context, max_y, model_ensemble, Result};
use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Status, Table};

pub fn run(cfg: &ExperimentConfig, alpha: Option<f64>, samples: u64) -> Result<Report> {
    let primes = primes_up_to(max_y(cfg));
    let mut counter = PsiCounter::new();
    let mut table = Table::new(&["x", "y", "big_y", "primes", "mean", "variance", "ks", "pmf_total"]);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &p in &cfg.points {
        let ctx = context(cfg, p)?;
        let (x, y) = (p.x, p.y);
        let e = model_ensemble(cfg, &ctx, &primes, alpha, &mut counter)?;
        let order = cfg.moments.max(4);
        let dist = exact_distribution(&e, order)?;

        let total = dist.pmf_total();
        checks.push(Check::at("pmf_total", x, y).at_most((total - 1.0).abs(), 1e-12));

        let indicator_var: f64 = e.probs().iter().map(|&q| centered_indicator_moment(q, 2)).sum();
        let rel = (indicator_var - dist.variance).abs() / dist.variance.max(f64::MIN_POSITIVE);
        checks.push(Check::at("indicator_variance", x, y).at_most(rel, 1e-12));

        let bounds: Vec<_> = (2..=order).map(|k| centered_moment_bound(&dist, k)).collect();
        checks.push(if dist.variance >= 1.0 {
            let worst = bounds
                .iter()
                .map(|b| b.standardized.abs() / b.bound)
                .fold(0.0, f64::max);
            Check::at("moment_bound", x, y)
                .detail("largest |standardised central moment| as a fraction of its composition bound")
                .value(worst)
                .status(Status::from_bool(bounds.iter().all(|b| b.holds)))
        } else {
            Check::at("moment_bound", x, y)
                .detail(format!("the bound assumes variance >= 1, have {}", num(dist.variance)))
                .status(Status::NotApplicable)
        });

        let ks = model_ks(&dist);
        checks.push(match &ks {
            Some(k) if dist.variance >= 25.0 => Check::at("model_clt", x, y).at_most(k.ks_distance, th::MODEL_KS_MAX),
            _ => Check::at("model_clt", x, y)
                .detail(format!("variance {} is below 25", num(dist.variance)))
                .status(Status::NotApplicable),
        });

        let sample = (samples > 0).then(|| {
            let s = sample_s(&e, samples, cfg.seed);
            let c = compare_with_exact(&s, &dist);
            (s, c)
        });
        if let Some((_, c)) = &sample {
            let worst = c.z_scores.iter().map(|z| z.abs()).fold(0.0, f64::max);
            let check = Check::at("sample_moments", x, y).detail(format!(
                "largest |z| of the Monte Carlo moments k <= 4 against the exact law (limit {})",
                th::SAMPLE_Z_MAX
            ));
            checks.push(if c.mean_outlier {
                check.value(worst).status(Status::Fail)
            } else if worst > th::SAMPLE_Z_MAX {
                check.value(worst).status(Status::Flagged)
            } else {
                check.at_most(worst, th::SAMPLE_Z_MAX)
            });
        }

        table.push(vec![
            x.to_string(),
            y.to_string(),
            ctx.big_y.to_string(),
            e.len().to_string(),
            num(dist.mean),
            num(dist.variance),
            ks.as_ref().map_or("-".into(), |k| num(k.ks_distance)),
            num(total),
        ]);
        rows.push(json!({
            "x": x,
            "y": y,
            "big_y": ctx.big_y,
            "mode": e.mode(),
            "alpha": alpha,
            "primes": e.len(),
            "mean": dist.mean,
            "variance": dist.variance,
            "raw_moments": dist.raw_moments,
            "central_moments": dist.central_moments,
            "cancellation_flagged": dist.cancellation_flagged,
            "moment_bounds": bounds,
            "ks": ks.as_ref().map(|k| json!({ "ks_distance": k.ks_distance, "ks_sup": k.ks_sup })),
            "pmf_total": total,
            "pmf": dist.pmf,
            "samples": sample.map(|(s, c)| json!({
                "n_samples": s.n_samples,
                "seed": s.seed,
                "raw": (1..=4).map(|j| s.raw(j)).collect::<Vec<_>>(),
                "z_scores": c.z_scores,
                "mean_outlier": c.mean_outlier,
            })),
        }));
    }
    Ok(Report {
        command: "model",
        results: json!({ "points": rows }),
        table,
        checks,
    })
}
