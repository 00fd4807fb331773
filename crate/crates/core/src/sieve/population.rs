//! Joint `(ω, ω_Y)` histograms over `S(x, y)` and `U(x, y)`.
//!
//! Two independent producers:
//!
//! * [`scan_populations`] visits every `n <= x` through the segment kernel.
//! * [`tree_populations`] walks the factorisation tree of smooth numbers and
//!   counts whole batches of leaves with the prime-counting function, which
//!   reaches `x` far beyond what a scan can afford.
//!
//! Every statistic downstream is a function of these integer counts, so
//! results do not depend on thread count or segment order.

use serde::Serialize;

use super::context::SmoothContext;
use super::count::check_scan_budget;
use super::primes::{isqrt, primes_up_to, PrimeTable};
use super::segment::{scan, Want};
use super::SieveConfig;
use crate::error::Result;

/// `ω(n) <= 15` for every `n < 2^64`.
pub const MAX_OMEGA: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaHistogram {
    /// `counts[w][wy]` = number of members with `ω = w` and `ω_Y = wy`.
    counts: [[u64; MAX_OMEGA]; MAX_OMEGA],
}

impl Default for OmegaHistogram {
    fn default() -> Self {
        OmegaHistogram {
            counts: [[0; MAX_OMEGA]; MAX_OMEGA],
        }
    }
}

impl OmegaHistogram {
    pub fn add(&mut self, omega: usize, omega_y: usize, count: u64) {
        self.counts[omega][omega_y] += count;
    }

    pub fn merge(mut self, other: &OmegaHistogram) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += y;
            }
        }
        self
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().flatten().map(|&c| c as u128).sum()
    }

    pub fn count(&self, omega: usize, omega_y: usize) -> u64 {
        self.counts[omega][omega_y]
    }

    /// `(ω, ω_Y, count)` for every nonempty cell, ascending.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().enumerate().flat_map(|(w, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(move |(wy, &c)| (w, wy, c))
        })
    }

    /// Distribution of `ω` as `(value, count)` pairs.
    pub fn omega_marginal(&self) -> Vec<(i64, u128)> {
        self.marginal(|w, _| w as i64)
    }

    /// Distribution of `ω_Y`.
    pub fn omega_y_marginal(&self) -> Vec<(i64, u128)> {
        self.marginal(|_, wy| wy as i64)
    }

    /// Distribution of `h = ω − ω_Y`.
    pub fn h_marginal(&self) -> Vec<(i64, u128)> {
        self.marginal(|w, wy| w as i64 - wy as i64)
    }

    fn marginal(&self, key: impl Fn(usize, usize) -> i64) -> Vec<(i64, u128)> {
        let mut acc = std::collections::BTreeMap::new();
        for (w, wy, c) in self.cells() {
            *acc.entry(key(w, wy)).or_insert(0u128) += c as u128;
        }
        acc.into_iter().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PopulationHistograms {
    pub smooth: OmegaHistogram,
    pub ultra: OmegaHistogram,
}

/// Which producer builds the histograms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PopulationEngine {
    Scan,
    Tree,
}

impl PopulationEngine {
    /// The scan for small ranges, the factor tree beyond (it is orders of
    /// magnitude faster once `x` passes a few million).
    pub fn auto(x: u64) -> Self {
        if x <= 1 << 22 {
            PopulationEngine::Scan
        } else {
            PopulationEngine::Tree
        }
    }
}

pub fn populations(
    ctx: &SmoothContext,
    engine: PopulationEngine,
    cfg: &SieveConfig,
) -> Result<PopulationHistograms> {
    match engine {
        PopulationEngine::Scan => scan_populations(ctx, cfg),
        PopulationEngine::Tree => Ok(tree_populations(ctx)),
    }
}

/// Histograms by visiting every `n <= x`.
pub fn scan_populations(ctx: &SmoothContext, cfg: &SieveConfig) -> Result<PopulationHistograms> {
    check_scan_budget(ctx.x, cfg)?;
    let primes = primes_up_to(ctx.y.min(isqrt(ctx.x)));
    let want = Want {
        lpf: false,
        omega: true,
        ultra: true,
    };
    Ok(scan(
        ctx.x,
        &primes,
        ctx.y,
        ctx.big_y,
        want,
        cfg,
        PopulationHistograms::default,
        |s| {
            let mut h = PopulationHistograms::default();
            for i in 0..s.len() {
                let e = s.element(i);
                if e.smooth {
                    h.smooth.add(e.omega as usize, e.omega_y as usize, 1);
                    if e.ultra {
                        h.ultra.add(e.omega as usize, e.omega_y as usize, 1);
                    }
                }
            }
            h
        },
        |a, b| PopulationHistograms {
            smooth: a.smooth.merge(&b.smooth),
            ultra: a.ultra.merge(&b.ultra),
        },
    ))
}

/// Histograms by depth-first enumeration of `n = p_1^{e_1} ⋯ p_r^{e_r}` with
/// ascending primes. Below a node `m`, the children `m·q` with
/// `q > sqrt(x/m)` are leaves (no room for a second factor), so they are
/// counted in bulk with `π`.
pub fn tree_populations(ctx: &SmoothContext) -> PopulationHistograms {
    let top = ctx.y.min(ctx.x);
    let table = PrimeTable::new(top);
    let mut walk = TreeWalk {
        x: ctx.x,
        y: top,
        big_y: ctx.big_y,
        table: &table,
        out: PopulationHistograms::default(),
    };
    walk.visit(1, 0, 0, 0, true);
    walk.out
}

struct TreeWalk<'a> {
    x: u64,
    y: u64,
    big_y: u64,
    table: &'a PrimeTable,
    out: PopulationHistograms,
}

impl TreeWalk<'_> {
    fn visit(&mut self, m: u64, next: usize, w: usize, wy: usize, ultra: bool) {
        self.out.smooth.add(w, wy, 1);
        if ultra {
            self.out.ultra.add(w, wy, 1);
        }
        let primes = self.table.primes();
        if next >= primes.len() {
            return;
        }
        let rem = self.x / m;
        let root = isqrt(rem);

        // Leaves: primes q in [max(p_next, root + 1), min(y, rem)].
        let a = primes[next].max(root + 1);
        let b = self.y.min(rem);
        if a <= b {
            let below_a = self.table.pi(a - 1);
            let all = self.table.pi(b) - below_a;
            let small = if self.big_y >= a {
                self.table.pi(self.big_y.min(b)) - below_a
            } else {
                0
            };
            let large = (all - small) as u64;
            let small = small as u64;
            self.out.smooth.add(w + 1, wy + 1, small);
            self.out.smooth.add(w + 1, wy, large);
            if ultra {
                self.out.ultra.add(w + 1, wy + 1, small);
                self.out.ultra.add(w + 1, wy, large);
            }
        }

        // Interior children: q <= sqrt(x/m), every exponent that fits.
        for (i, &q) in primes.iter().enumerate().skip(next) {
            if q > root {
                break;
            }
            let dy = (q <= self.big_y) as usize;
            let mut qe = q;
            loop {
                self.visit(m * qe, i + 1, w + 1, wy + dy, ultra && qe <= self.y);
                match qe.checked_mul(q) {
                    Some(n) if n <= rem => qe = n,
                    _ => break,
                }
            }
        }
    }
}
