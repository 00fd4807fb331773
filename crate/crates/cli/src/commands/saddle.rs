use serde_json::json;
use smoothek::saddle::{solve_alpha, ALPHA_TOLERANCE};
use smoothek::sieve::primes_up_to;
use smoothek::thresholds as th;

use super::{context, fixed_u_order, max_y, worst_increase, Result};
use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Status, Table};

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let primes = primes_up_to(max_y(cfg));
    let mut table = Table::new(&["x", "y", "u", "alpha", "residual", "alpha_approx", "gap", "xi", "degenerate"]);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut gaps = Vec::new();
    for &p in &cfg.points {
        let ctx = context(cfg, p)?;
        let s = solve_alpha(&ctx, &primes)?;
        let tol = ALPHA_TOLERANCE * s.log_x;
        checks.push(Check::at("alpha_residual", p.x, p.y).at_most(s.residual, tol));
        if s.xi.degenerate {
            checks.push(
                Check::at("degenerate", p.x, p.y)
                    .detail("u = 1, so xi = 0 and alpha_approx = 1")
                    .status(Status::Flagged),
            );
        }
        gaps.push(s.approx_gap());
        table.push(vec![
            p.x.to_string(),
            p.y.to_string(),
            num(ctx.u),
            num(s.alpha),
            num(s.residual),
            num(s.alpha_approx),
            num(s.approx_gap()),
            num(s.xi.xi),
            s.xi.degenerate.to_string(),
        ]);
        rows.push(json!({
            "x": p.x,
            "y": p.y,
            "u": ctx.u,
            "alpha": s.alpha,
            "residual": s.residual,
            "tolerance": tol,
            "alpha_approx": s.alpha_approx,
            "approx_gap": s.approx_gap(),
            "xi": s.xi,
            "degenerate": s.xi.degenerate,
        }));
    }
    if let Some(order) = fixed_u_order(cfg) {
        let worst = worst_increase(&gaps, &order);
        checks.push(
            Check::global("approx_gap_trend")
                .detail("|alpha - alpha_approx| along increasing y at fixed u")
                .at_most(worst, th::APPROX_GAP_TREND_SLACK),
        );
    }
    Ok(Report {
        command: "saddle",
        results: json!({ "points": rows }),
        table,
        checks,
    })
}
