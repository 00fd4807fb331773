use serde_json::json;
use smoothek::saddle::{m_sum, prime_sum_m, solve_alpha};
use smoothek::sieve::primes_up_to;

use super::{context, max_y, Result};
use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Status, Table};

/// Meissel–Mertens constant.
pub const MERTENS_B: f64 = 0.261_497_212_847_642_8;

/// Rosser–Schoenfeld: `|Σ_{p<=t} 1/p − log log t − B| < 1 / log² t` for `t > 1`.
fn mertens_bound(t: u64) -> f64 {
    let l = (t as f64).ln();
    1.0 / (l * l)
}

pub fn run(cfg: &ExperimentConfig, extra_t: &[u64]) -> Result<Report> {
    let top = extra_t.iter().copied().max().unwrap_or(0).max(max_y(cfg));
    let primes = primes_up_to(top);
    let mut table = Table::new(&["x", "y", "t", "alpha", "m_t", "pi_t", "loglog_t", "mertens_gap"]);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &p in &cfg.points {
        let ctx = context(cfg, p)?;
        let (x, y) = (p.x, p.y);
        let alpha = solve_alpha(&ctx, &primes)?.alpha;
        let mut ts = vec![2, ctx.big_y, y];
        ts.extend(extra_t.iter().copied().filter(|&t| t >= 2));
        ts.sort_unstable();
        ts.dedup();

        let mut sums = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        let mut monotone = true;
        for &t in &ts {
            let r = prime_sum_m(&ctx, t, alpha, &primes);
            monotone &= r.m_t >= prev;
            prev = r.m_t;
            let reciprocal = m_sum(t, 1.0, &primes);
            let mertens_gap = (reciprocal - r.loglog_t_target - MERTENS_B).abs();
            checks.push(
                Check::at(&format!("mertens_t{t}"), x, y)
                    .detail("sum of 1/p against log log t + B, Rosser-Schoenfeld bound")
                    .at_most(mertens_gap, mertens_bound(t)),
            );
            checks.push(
                Check::at(&format!("pi_bound_t{t}"), x, y)
                    .detail("M(t) <= pi(t)")
                    .at_most(r.m_t, r.prime_count as f64),
            );
            table.push(vec![
                x.to_string(),
                y.to_string(),
                t.to_string(),
                num(alpha),
                num(r.m_t),
                r.prime_count.to_string(),
                num(r.loglog_t_target),
                num(mertens_gap),
            ]);
            sums.push(json!({
                "t": t,
                "m_t": r.m_t,
                "pi_t": r.prime_count,
                "reciprocal_sum": reciprocal,
                "mertens_gap": mertens_gap,
                "targets": {
                    "loglog_t": r.loglog_t_target,
                    "sumybig": r.sumybig_target,
                    "lemma41": r.lemma41_target,
                    "truncation": r.trunc_target,
                },
            }));
        }
        checks.push(
            Check::at("monotone", x, y)
                .detail("M(t) nondecreasing in t")
                .status(Status::from_bool(monotone)),
        );
        rows.push(json!({
            "x": x,
            "y": y,
            "u": ctx.u,
            "big_y": ctx.big_y,
            "alpha": alpha,
            "sums": sums,
        }));
    }
    Ok(Report {
        command: "sums",
        results: json!({ "points": rows }),
        table,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mertens_bound_holds_on_small_t() {
        let primes = primes_up_to(100_000);
        for t in [2u64, 3, 10, 100, 1000, 99_991] {
            let gap = (m_sum(t, 1.0, &primes) - (t as f64).ln().ln() - MERTENS_B).abs();
            assert!(gap < mertens_bound(t), "t = {t}: {gap}");
        }
    }
}
