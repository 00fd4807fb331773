use super::context::SmoothContext;
use super::primes::{isqrt, primes_up_to};
use super::segment::{scan, SegmentSieve, Want};
use super::SieveConfig;
use crate::error::{Error, Result};

/// Exact `Ψ(x, y)` and `Υ(x, y)` from one segmented pass over `[1, x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveCounts {
    pub smooth: u128,
    pub ultra: u128,
}

pub(crate) fn check_scan_budget(x: u64, cfg: &SieveConfig) -> Result<()> {
    if x > cfg.scan_budget {
        return Err(Error::Capacity {
            what: "segmented scan",
            requested: x as u128,
            budget: cfg.scan_budget as u128,
        });
    }
    Ok(())
}

pub fn count_sieve(ctx: &SmoothContext, cfg: &SieveConfig) -> Result<SieveCounts> {
    check_scan_budget(ctx.x, cfg)?;
    let primes = primes_up_to(ctx.y.min(isqrt(ctx.x)));
    let want = Want {
        ultra: true,
        ..Want::default()
    };
    let (smooth, ultra) = scan(
        ctx.x,
        &primes,
        ctx.y,
        ctx.big_y,
        want,
        cfg,
        || (0u128, 0u128),
        |s| {
            let mut a = 0u64;
            let mut b = 0u64;
            for i in 0..s.len() {
                let (sm, ul) = s.smooth_flags(i);
                a += sm as u64;
                b += ul as u64;
            }
            (a as u128, b as u128)
        },
        |l, r| (l.0 + r.0, l.1 + r.1),
    );
    Ok(SieveCounts { smooth, ultra })
}

/// `Ψ(x, y)` by segmented sieving, counting `n = 1`.
pub fn count_smooth_sieve(ctx: &SmoothContext, cfg: &SieveConfig) -> Result<u128> {
    Ok(count_sieve(ctx, cfg)?.smooth)
}

/// `Υ(x, y)` by segmented sieving.
pub fn count_ultra(ctx: &SmoothContext, cfg: &SieveConfig) -> Result<u128> {
    Ok(count_sieve(ctx, cfg)?.ultra)
}

/// `Ψ(x, y)` for every `x` in `0..=limit` from a single sieve pass.
pub fn smooth_prefix_counts(limit: u64, y: u64, cfg: &SieveConfig) -> Result<Vec<u64>> {
    if limit + 1 > cfg.table_budget {
        return Err(Error::Capacity {
            what: "prefix count table",
            requested: limit as u128 + 1,
            budget: cfg.table_budget as u128,
        });
    }
    let primes = primes_up_to(y.min(isqrt(limit.max(1))));
    let mut sieve = SegmentSieve::new(&primes, y, y, Want::default());
    let mut out = Vec::with_capacity(limit as usize + 1);
    out.push(0u64);
    let mut running = 0u64;
    let mut lo = 1u64;
    while lo <= limit {
        let len = (cfg.segment_len as u64).min(limit - lo + 1) as usize;
        sieve.fill(lo, len);
        for i in 0..len {
            running += sieve.smooth_flags(i).0 as u64;
            out.push(running);
        }
        lo += len as u64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_examples() {
        let cfg = SieveConfig::default();
        let c = SmoothContext::new(10, 2).unwrap();
        assert_eq!(count_smooth_sieve(&c, &cfg).unwrap(), 4);
        assert_eq!(count_ultra(&c, &cfg).unwrap(), 2);
        let c = SmoothContext::new(1000, 1000).unwrap();
        assert_eq!(count_smooth_sieve(&c, &cfg).unwrap(), 1000);
    }

    #[test]
    fn segment_length_does_not_matter() {
        let c = SmoothContext::new(100_000, 31).unwrap();
        let a = count_sieve(&c, &SieveConfig::default()).unwrap();
        let b = count_sieve(
            &c,
            &SieveConfig {
                segment_len: 977,
                ..SieveConfig::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.ultra <= a.smooth);
    }

    #[test]
    fn prefix_counts_match_single_counts() {
        let cfg = SieveConfig {
            segment_len: 1000,
            ..SieveConfig::default()
        };
        let pre = smooth_prefix_counts(5000, 7, &cfg).unwrap();
        assert_eq!(pre[0], 0);
        assert_eq!(pre[10], count_smooth_sieve(&SmoothContext::new(10, 7).unwrap(), &cfg).unwrap() as u64);
        for x in [7u64, 100, 999, 1000, 1001, 4999, 5000] {
            let c = SmoothContext::new(x, 7).unwrap();
            assert_eq!(pre[x as usize] as u128, count_smooth_sieve(&c, &cfg).unwrap(), "x={x}");
        }
    }

    #[test]
    fn budget() {
        let cfg = SieveConfig {
            scan_budget: 100,
            ..SieveConfig::default()
        };
        let c = SmoothContext::new(101, 2).unwrap();
        assert!(matches!(count_smooth_sieve(&c, &cfg), Err(Error::Capacity { .. })));
    }
}
