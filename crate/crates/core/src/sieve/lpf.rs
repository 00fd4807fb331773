use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::context::SmoothContext;
use super::primes::{isqrt, primes_up_to};
use super::segment::{SegmentSieve, Want};
use super::ultra::UltraBoundTable;
use super::SieveConfig;
use crate::error::{Error, Result};

/// Largest-prime-factor table over `[lo, hi]`, with `P(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpfTable {
    lo: u64,
    hi: u64,
    lpf: Vec<u64>,
}

pub const CACHE_MAGIC: &[u8; 8] = b"SEKLPF\0\0";
pub const CACHE_VERSION: u32 = 1;

/// Builds the table segment by segment. Fails with a capacity error when the
/// range holds more entries than `cfg.table_budget`.
pub fn build_lpf(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<LpfTable> {
    if lo < 1 || lo > hi {
        return Err(Error::InvalidParams(format!(
            "LPF range [{lo}, {hi}] must satisfy 1 <= lo <= hi"
        )));
    }
    let entries = (hi - lo) as u128 + 1;
    if entries > cfg.table_budget as u128 {
        return Err(Error::Capacity {
            what: "LPF table",
            requested: entries,
            budget: cfg.table_budget as u128,
        });
    }
    let primes = primes_up_to(isqrt(hi));
    let seg = cfg.segment_len.max(1) as u64;
    let want = Want {
        lpf: true,
        ..Want::default()
    };
    let starts: Vec<u64> = (lo..=hi).step_by(seg as usize).collect();
    let chunks: Vec<Vec<u64>> = starts
        .par_iter()
        .map_init(
            || SegmentSieve::new(&primes, u64::MAX, 0, want),
            |sieve, &s| {
                let len = ((hi - s) + 1).min(seg) as usize;
                sieve.fill(s, len);
                (0..len).map(|i| sieve.element(i).lpf).collect()
            },
        )
        .collect();
    let mut lpf = Vec::with_capacity(entries as usize);
    for c in chunks {
        lpf.extend(c);
    }
    Ok(LpfTable { lo, hi, lpf })
}

impl LpfTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    /// `P(n)`. Panics when `n` lies outside the table.
    pub fn lpf(&self, n: u64) -> u64 {
        assert!(self.contains(n), "{n} outside LPF table [{}, {}]", self.lo, self.hi);
        self.lpf[(n - self.lo) as usize]
    }

    pub fn entries(&self) -> &[u64] {
        &self.lpf
    }

    /// Prime factorisation `(p, e)` in ascending `p`, following the table
    /// while the cofactor stays in range and trial division otherwise.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = if self.contains(m) {
                self.lpf(m)
            } else {
                largest_factor_by_trial(m)
            };
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out.reverse();
        out
    }

    pub fn is_smooth(&self, n: u64, ctx: &SmoothContext) -> bool {
        self.lpf(n) <= ctx.y
    }

    pub fn is_ultra_smooth(&self, n: u64, ctx: &SmoothContext, ub: &UltraBoundTable) -> bool {
        debug_assert_eq!(ub.y(), ctx.y);
        if !self.is_smooth(n, ctx) {
            return false;
        }
        self.factorize(n)
            .into_iter()
            .all(|(p, e)| ub.v(p).is_some_and(|v| e <= v))
    }

    /// Distinct primes `<= t` dividing `n`.
    pub fn omega_t(&self, n: u64, t: u64) -> u32 {
        self.factorize(n).iter().filter(|&&(p, _)| p <= t).count() as u32
    }

    /// `#{n <= x : P(n) <= y}` read off a table that starts at 1.
    pub fn count_smooth(&self, x: u64, y: u64) -> u128 {
        assert_eq!(self.lo, 1, "counting needs a table starting at 1");
        assert!(x <= self.hi);
        self.lpf[..x as usize].iter().filter(|&&p| p <= y).count() as u128
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            w.write_all(CACHE_MAGIC)?;
            w.write_all(&CACHE_VERSION.to_le_bytes())?;
            w.write_all(&self.lo.to_le_bytes())?;
            w.write_all(&self.hi.to_le_bytes())?;
            for v in &self.lpf {
                w.write_all(&v.to_le_bytes())?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<LpfTable> {
        let bad = |reason: &str| Error::Cache {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != CACHE_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let lo = u64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let hi = u64::from_le_bytes(b8);
        if lo < 1 || lo > hi {
            return Err(bad("invalid range"));
        }
        let n = (hi - lo + 1) as usize;
        let mut lpf = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b8).map_err(|_| bad("truncated"))?;
            lpf.push(u64::from_le_bytes(b8));
        }
        if r.read(&mut b8)? != 0 {
            return Err(bad("trailing bytes"));
        }
        Ok(LpfTable { lo, hi, lpf })
    }
}

/// Cache file name for a range inside a cache directory.
pub fn cache_path(dir: &Path, lo: u64, hi: u64) -> PathBuf {
    dir.join(format!("lpf_{lo}_{hi}.bin"))
}

/// Loads the table from `dir` when a valid cache file exists, otherwise builds
/// it and writes the cache.
pub fn build_lpf_cached(lo: u64, hi: u64, cfg: &SieveConfig, dir: &Path) -> Result<LpfTable> {
    let path = cache_path(dir, lo, hi);
    if path.exists() {
        if let Ok(t) = LpfTable::load(&path) {
            if t.lo == lo && t.hi == hi {
                return Ok(t);
            }
        }
    }
    let table = build_lpf(lo, hi, cfg)?;
    fs::create_dir_all(dir)?;
    table.save(&path)?;
    Ok(table)
}

fn largest_factor_by_trial(mut m: u64) -> u64 {
    let mut last = 1;
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        while m % d == 0 {
            m /= d;
            last = d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        m
    } else {
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SieveConfig {
        SieveConfig {
            segment_len: 1000,
            ..SieveConfig::default()
        }
    }

    #[test]
    fn small_values() {
        let t = build_lpf(1, 100, &cfg()).unwrap();
        assert_eq!(t.lpf(1), 1);
        assert_eq!(t.lpf(12), 3);
        assert_eq!(t.lpf(97), 97);
        assert_eq!(t.lpf(64), 2);
        assert_eq!(t.lpf(99), 11);
    }

    #[test]
    fn offset_range_and_factorize() {
        let t = build_lpf(1_000_000, 1_001_000, &cfg()).unwrap();
        assert_eq!(t.lpf(1_000_000), 5);
        assert_eq!(t.factorize(1_000_000), vec![(2, 6), (5, 6)]);
        assert_eq!(t.lpf(1_000_003), 1_000_003);
    }

    #[test]
    fn predicates() {
        let t = build_lpf(1, 100, &cfg()).unwrap();
        let c2 = SmoothContext::new(10, 2).unwrap();
        assert!(t.is_smooth(8, &c2));
        assert!(t.is_smooth(1, &c2));
        let c3 = SmoothContext::new(10, 3).unwrap();
        assert!(!t.is_smooth(10, &c3));
        let c4 = SmoothContext::new(100, 4).unwrap();
        let ub = UltraBoundTable::new(4, &[2, 3]);
        assert!(!t.is_ultra_smooth(8, &c4, &ub));
        assert!(t.is_ultra_smooth(12, &c4, &ub));
        assert!(t.is_ultra_smooth(1, &c4, &ub));
        assert_eq!(t.omega_t(30, 3), 2);
        assert_eq!(t.count_smooth(10, 2), 4);
    }

    #[test]
    fn capacity_error() {
        let small = SieveConfig {
            table_budget: 10,
            ..SieveConfig::default()
        };
        assert!(matches!(build_lpf(1, 11, &small), Err(Error::Capacity { .. })));
        assert!(build_lpf(1, 10, &small).is_ok());
        assert!(build_lpf(0, 10, &small).is_err());
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let t = build_lpf_cached(5, 5000, &cfg(), dir.path()).unwrap();
        let path = cache_path(dir.path(), 5, 5000);
        let loaded = LpfTable::load(&path).unwrap();
        assert_eq!(loaded, t);

        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], CACHE_MAGIC);
        assert_eq!(bytes.len(), 8 + 4 + 8 + 8 + 8 * 4996);

        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(LpfTable::load(&path), Err(Error::Cache { .. })));
        // A corrupt cache is rebuilt transparently.
        let again = build_lpf_cached(5, 5000, &cfg(), dir.path()).unwrap();
        assert_eq!(again, t);
    }
}
