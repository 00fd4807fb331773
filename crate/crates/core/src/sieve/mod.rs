//! Primes, largest-prime-factor tables and exact counts over `S(x, y)` and
//! `U(x, y)`.

mod context;
mod count;
mod lpf;
mod omega;
mod population;
mod primes;
mod recurrence;
mod segment;
mod ultra;

pub use context::{phi, SmoothContext};
pub use count::{count_sieve, count_smooth_sieve, count_ultra, smooth_prefix_counts, SieveCounts};
pub use lpf::{build_lpf, build_lpf_cached, cache_path, LpfTable, CACHE_MAGIC, CACHE_VERSION};
pub use omega::{omega, omega_t};
pub use population::{
    populations, scan_populations, tree_populations, OmegaHistogram, PopulationEngine,
    PopulationHistograms, MAX_OMEGA,
};
pub use primes::{isqrt, primes_up_to, PrimeTable};
pub use recurrence::{count_smooth_recurrence, PsiCounter, DEFAULT_MEMO_CAPACITY};
pub use ultra::{max_exponent, UltraBoundTable};

/// Memory and work limits for sieving.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Entries per segment; the default keeps a segment's working set in L2.
    pub segment_len: usize,
    /// Largest materialised LPF table, in entries.
    pub table_budget: u64,
    /// Largest `x` a full segmented scan will accept.
    pub scan_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: 1 << 16,
            table_budget: 1 << 25,
            scan_budget: 20_000_000_000,
        }
    }
}
