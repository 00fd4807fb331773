//! `Ψ(x, y)` through the Buchstab step
//! `Ψ(x, p_k) = Ψ(x, p_{k-1}) + Ψ(⌊x/p_k⌋, p_k)`, memoised on
//! `(⌊x/d⌋, k)`. Independent of the segmented sieve.

use std::num::NonZeroUsize;

use lru::LruCache;

use super::primes::{isqrt, PrimeTable};

pub const DEFAULT_MEMO_CAPACITY: usize = 1 << 20;

/// Keys below this are cheap enough to recompute.
const MEMO_MIN_X: u64 = 256;

pub struct PsiCounter {
    table: PrimeTable,
    memo: LruCache<(u64, u32), u128>,
}

impl Default for PsiCounter {
    fn default() -> Self {
        Self::new()
    }
}

impl PsiCounter {
    pub fn new() -> Self {
        Self::with_capacity(DEFAULT_MEMO_CAPACITY)
    }

    pub fn with_capacity(capacity: usize) -> Self {
        PsiCounter {
            table: PrimeTable::new(1 << 12),
            memo: LruCache::new(NonZeroUsize::new(capacity.max(1)).unwrap()),
        }
    }

    fn ensure_primes(&mut self, limit: u64) {
        if self.table.limit() < limit {
            let grown = limit.max(self.table.limit().saturating_mul(2));
            self.table = PrimeTable::new(grown);
        }
    }

    /// Exact `Ψ(x, y)` for `x >= 0`, `y >= 2`; `Ψ(0, y) = 0`, `Ψ(1, y) = 1`.
    pub fn psi(&mut self, x: u64, y: u64) -> u128 {
        assert!(y >= 2, "psi needs y >= 2");
        if y >= x {
            return x as u128;
        }
        self.ensure_primes(y);
        let k = self.table.pi(y);
        self.phi(x, k)
    }

    /// `Ψ(x, p_k)` with `k` the number of admissible primes.
    fn phi(&mut self, x: u64, k: usize) -> u128 {
        if x == 0 {
            return 0;
        }
        if k == 0 || x == 1 {
            return 1;
        }
        let pk = self.table.primes()[k - 1];
        if pk >= x {
            return x as u128;
        }
        if k == 1 {
            return (64 - x.leading_zeros()) as u128;
        }
        let s = isqrt(x);
        let ks = self.table.pi(s.min(self.table.limit()));
        if k > ks {
            // Every prime p in (sqrt x, p_k] has ⌊x/p⌋ < p, so Ψ(⌊x/p⌋, p) = ⌊x/p⌋.
            return self.phi(x, ks) + self.quotient_sum(x, s + 1, pk);
        }
        let key = (x, k as u32);
        if x >= MEMO_MIN_X {
            if let Some(&v) = self.memo.get(&key) {
                return v;
            }
        }
        let mut total = (64 - x.leading_zeros()) as u128;
        for i in 2..=k {
            let p = self.table.primes()[i - 1];
            total += self.phi(x / p, i);
        }
        if x >= MEMO_MIN_X {
            self.memo.put(key, total);
        }
        total
    }

    /// `Σ ⌊x/p⌋` over primes `p ∈ [a, b]`, grouping equal quotients.
    fn quotient_sum(&self, x: u64, a: u64, b: u64) -> u128 {
        let mut sum = 0u128;
        let mut t = a;
        while t <= b {
            let q = x / t;
            let t2 = (x / q).min(b);
            let count = self.table.pi(t2) - self.table.pi(t - 1);
            sum += q as u128 * count as u128;
            t = t2 + 1;
        }
        sum
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// One-shot `Ψ(x, y)` via the recurrence.
pub fn count_smooth_recurrence(x: u64, y: u64) -> u128 {
    PsiCounter::new().psi(x, y)
}
