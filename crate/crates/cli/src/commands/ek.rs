use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use smoothek::model::exact_distribution;
use smoothek::sieve::{populations, primes_up_to, PsiCounter, SieveConfig};
use smoothek::stats::{
    ek_distribution, model_ks, moment_gaps, CdfPoint, EkReport, KsSummary, MomentGaps, Population,
    Standardization,
};
use smoothek::thresholds as th;

use super::{context, engine, fixed_u_order, max_y, model_ensemble, worst_increase, Result};
use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Status, Table};

pub struct EkOptions<'a> {
    pub model_only: bool,
    pub alpha: Option<f64>,
    pub out_dir: Option<&'a Path>,
}

const POPULATIONS: [Population; 2] = [Population::Smooth, Population::Ultra];
const STANDARDIZATIONS: [Standardization; 2] = [Standardization::Paper, Standardization::Empirical];

fn tag<T: serde::Serialize>(v: T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn ks_json(k: &Option<KsSummary>) -> Value {
    match k {
        Some(k) => json!({ "ks_distance": k.ks_distance, "ks_sup": k.ks_sup }),
        None => Value::Null,
    }
}

fn report_json(r: &EkReport) -> Value {
    json!({
        "population": r.population,
        "standardization": r.standardization,
        "count": r.count as u64,
        "center": r.center,
        "scale": r.scale,
        "degenerate": r.degenerate,
        "omega": ks_json(&r.omega),
        "omega_y": ks_json(&r.omega_y),
        "tail": r.tail,
        "slutsky": r.slutsky,
        "moments": r.moments,
    })
}

fn gaps_json(g: &MomentGaps) -> Value {
    json!({
        "center": g.center,
        "a": g.a,
        "delta_direct": g.delta_direct,
        "delta_binomial": g.delta_binomial,
        "relative_error": g.relative_error,
        "normalized": g.normalized,
    })
}

fn write_cdf(dir: &Path, name: &str, grid: &[CdfPoint]) -> std::io::Result<()> {
    let mut s = String::from("z,F_emp,Phi\n");
    for p in grid {
        s.push_str(&format!("{},{},{}\n", p.z, p.f_emp, p.phi));
    }
    fs::write(dir.join(name), s)
}

pub fn run(cfg: &ExperimentConfig, opts: &EkOptions) -> Result<Report> {
    let primes = primes_up_to(max_y(cfg));
    let sieve = SieveConfig::default();
    let mut counter = PsiCounter::new();
    let mut table = Table::new(&["x", "y", "population", "standardization", "count", "ks", "ks_sup", "slutsky_lhs", "slutsky_rhs"]);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut smooth_paper_ks = Vec::new();
    if let Some(dir) = opts.out_dir {
        fs::create_dir_all(dir)?;
    }

    for &p in &cfg.points {
        let ctx = context(cfg, p)?;
        let (x, y) = (p.x, p.y);
        let ll = ctx.loglog_y();

        let ensemble = model_ensemble(cfg, &ctx, &primes, opts.alpha, &mut counter)?;
        let dist = exact_distribution(&ensemble, cfg.moments.max(4))?;
        let mks = model_ks(&dist);
        checks.push(match &mks {
            Some(k) if dist.variance >= 25.0 => Check::at("model_clt", x, y).at_most(k.ks_distance, th::MODEL_KS_MAX),
            _ => Check::at("model_clt", x, y)
                .detail(format!("variance {} is below 25", num(dist.variance)))
                .status(Status::NotApplicable),
        });
        table.push(vec![
            x.to_string(),
            y.to_string(),
            "model".into(),
            "empirical".into(),
            ensemble.len().to_string(),
            mks.as_ref().map_or("-".into(), |k| num(k.ks_distance)),
            mks.as_ref().map_or("-".into(), |k| num(k.ks_sup)),
            "-".into(),
            "-".into(),
        ]);
        if let (Some(dir), Some(k)) = (opts.out_dir, &mks) {
            write_cdf(dir, &format!("cdf_{x}_{y}_model.csv"), &k.grid)?;
        }
        let model_json = json!({
            "mode": ensemble.mode(),
            "primes": ensemble.len(),
            "mean": dist.mean,
            "variance": dist.variance,
            "central_moments": dist.central_moments,
            "cancellation_flagged": dist.cancellation_flagged,
            "ks": ks_json(&mks),
        });

        if opts.model_only {
            rows.push(json!({ "x": x, "y": y, "u": ctx.u, "big_y": ctx.big_y, "model": model_json }));
            continue;
        }

        let hist = populations(&ctx, engine(cfg, x), &sieve)?;
        let gaps = (ll > 0.0).then(|| moment_gaps(&hist.smooth.omega_y_marginal(), &dist, cfg.moments, ll));
        checks.push(match &gaps {
            Some(g) => Check::at("gap_identity", x, y)
                .detail("direct Delta^k against its expansion over A_j")
                .at_most(g.max_relative_error(), th::GAP_IDENTITY_REL),
            None => Check::at("gap_identity", x, y)
                .detail("log log y <= 0")
                .status(Status::NotApplicable),
        });

        let mut reports = Vec::new();
        for pop in POPULATIONS {
            let h = match pop {
                Population::Ultra => &hist.ultra,
                _ => &hist.smooth,
            };
            for s in STANDARDIZATIONS {
                let r = ek_distribution(&ctx, h, pop, s, cfg.moments);
                let name = format!("slutsky_{}_{}", tag(pop), tag(s));
                checks.push(match &r.slutsky {
                    Some(sl) => Check::at(&name, x, y).at_most(sl.lhs, sl.rhs),
                    None => Check::at(&name, x, y)
                        .detail("degenerate population or log log y <= 0")
                        .status(Status::NotApplicable),
                });
                if pop == Population::Smooth && s == Standardization::Paper {
                    smooth_paper_ks.push(r.ks_distance().unwrap_or(f64::NAN));
                }
                if let Some(dir) = opts.out_dir {
                    if let Some(k) = &r.omega {
                        write_cdf(dir, &format!("cdf_{x}_{y}_{}_{}_omega.csv", tag(pop), tag(s)), &k.grid)?;
                    }
                    if let Some(k) = &r.omega_y {
                        write_cdf(dir, &format!("cdf_{x}_{y}_{}_{}_omega_y.csv", tag(pop), tag(s)), &k.grid)?;
                    }
                }
                table.push(vec![
                    x.to_string(),
                    y.to_string(),
                    tag(pop),
                    tag(s),
                    r.count.to_string(),
                    r.omega.as_ref().map_or("-".into(), |k| num(k.ks_distance)),
                    r.omega.as_ref().map_or("-".into(), |k| num(k.ks_sup)),
                    r.slutsky.as_ref().map_or("-".into(), |sl| num(sl.lhs)),
                    r.slutsky.as_ref().map_or("-".into(), |sl| num(sl.rhs)),
                ]);
                reports.push(report_json(&r));
            }
        }
        rows.push(json!({
            "x": x,
            "y": y,
            "u": ctx.u,
            "big_y": ctx.big_y,
            "populations": reports,
            "model": model_json,
            "gaps": gaps.as_ref().map(gaps_json),
        }));
    }

    if !opts.model_only {
        if let Some(order) = fixed_u_order(cfg) {
            let worst = worst_increase(&smooth_paper_ks, &order);
            checks.push(
                Check::global("ks_trend")
                    .detail("paper-standardised KS of the smooth population along increasing y")
                    .at_most(worst, th::KS_TREND_SLACK),
            );
        }
    }
    Ok(Report {
        command: "ek",
        results: json!({ "points": rows }),
        table,
        checks,
    })
}
