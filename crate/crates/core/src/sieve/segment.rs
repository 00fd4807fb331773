//! Segment kernel shared by the LPF table, the counting scans and the
//! population histograms.
//!
//! For a window `[lo, lo + len)` the kernel multiplies every prime power
//! `p^k` (with `p` at most `min(y, sqrt(hi))`) into the entries it divides,
//! so that `smooth_part[i]` ends up as the product of all `p^e || n` with
//! small `p`. The cofactor `n / smooth_part[i]` is then either 1, a single
//! prime (when every prime up to `sqrt(hi)` was sieved) or a product of
//! primes above `y`. No per-element trial division is needed.

use rayon::prelude::*;

use super::primes::isqrt;
use super::SieveConfig;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Want {
    pub lpf: bool,
    pub omega: bool,
    pub ultra: bool,
}

/// Classification of one element after a segment pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Element {
    pub n: u64,
    pub smooth: bool,
    pub ultra: bool,
    pub omega: u8,
    pub omega_y: u8,
    pub lpf: u64,
}

pub(crate) struct SegmentSieve<'a> {
    primes: &'a [u64],
    y: u64,
    big_y: u64,
    want: Want,
    lo: u64,
    len: usize,
    smooth_part: Vec<u64>,
    largest_small: Vec<u32>,
    omega: Vec<u8>,
    omega_y: Vec<u8>,
    excess: Vec<bool>,
}

impl<'a> SegmentSieve<'a> {
    /// `primes` must contain every prime up to `min(y, sqrt(hi))` for any
    /// window later passed to [`fill`](Self::fill).
    pub fn new(primes: &'a [u64], y: u64, big_y: u64, want: Want) -> Self {
        SegmentSieve {
            primes,
            y,
            big_y,
            want,
            lo: 1,
            len: 0,
            smooth_part: Vec::new(),
            largest_small: Vec::new(),
            omega: Vec::new(),
            omega_y: Vec::new(),
            excess: Vec::new(),
        }
    }

    pub fn fill(&mut self, lo: u64, len: usize) {
        debug_assert!(lo >= 1 && len >= 1);
        self.lo = lo;
        self.len = len;
        let hi = lo + len as u64 - 1;
        reset(&mut self.smooth_part, len, 1);
        if self.want.lpf {
            reset(&mut self.largest_small, len, 1);
        }
        if self.want.omega {
            reset(&mut self.omega, len, 0);
            reset(&mut self.omega_y, len, 0);
        }
        if self.want.ultra {
            reset(&mut self.excess, len, false);
        }

        let bound = self.y.min(isqrt(hi));
        let limit = self.primes.partition_point(|&p| p <= bound);
        for &p in &self.primes[..limit] {
            let small_y = p <= self.big_y;
            let mut pk = p;
            let mut prev = 1u64;
            loop {
                let first = lo.div_ceil(pk) * pk;
                if first <= hi {
                    let start = (first - lo) as usize;
                    let step = pk as usize;
                    let newly_excess = self.want.ultra && pk > self.y && prev <= self.y;
                    if pk == p {
                        let mut i = start;
                        while i < len {
                            self.smooth_part[i] *= p;
                            if self.want.lpf {
                                self.largest_small[i] = p as u32;
                            }
                            if self.want.omega {
                                self.omega[i] += 1;
                                self.omega_y[i] += small_y as u8;
                            }
                            i += step;
                        }
                    } else {
                        let mut i = start;
                        while i < len {
                            self.smooth_part[i] *= p;
                            if newly_excess {
                                self.excess[i] = true;
                            }
                            i += step;
                        }
                    }
                }
                prev = pk;
                match pk.checked_mul(p) {
                    Some(next) if next <= hi => pk = next,
                    _ => break,
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn element(&self, i: usize) -> Element {
        let n = self.lo + i as u64;
        let part = self.smooth_part[i];
        let cof = n / part;
        let smooth = cof <= self.y;
        let mut omega = 0u8;
        let mut omega_y = 0u8;
        if self.want.omega {
            omega = self.omega[i];
            omega_y = self.omega_y[i];
            if cof > 1 && smooth {
                omega += 1;
                omega_y += (cof <= self.big_y) as u8;
            }
        }
        let lpf = if !self.want.lpf {
            0
        } else if cof > 1 {
            cof
        } else {
            self.largest_small[i] as u64
        };
        let ultra = smooth && self.want.ultra && !self.excess[i];
        Element {
            n,
            smooth,
            ultra,
            omega,
            omega_y,
            lpf,
        }
    }

    /// Fast path for counting: is entry `i` y-smooth (and ultra-smooth)?
    #[inline]
    pub fn smooth_flags(&self, i: usize) -> (bool, bool) {
        let n = self.lo + i as u64;
        let smooth = n / self.smooth_part[i] <= self.y;
        let ultra = smooth && self.want.ultra && !self.excess[i];
        (smooth, ultra)
    }
}

fn reset<T: Copy>(v: &mut Vec<T>, len: usize, value: T) {
    v.clear();
    v.resize(len, value);
}

/// Runs `visit` over every segment of `[1, x]` and combines the partial
/// results with `combine`, which must be associative and commutative so that
/// the outcome does not depend on the thread count.
pub(crate) fn scan<T, V, C>(
    x: u64,
    primes: &[u64],
    y: u64,
    big_y: u64,
    want: Want,
    cfg: &SieveConfig,
    identity: fn() -> T,
    visit: V,
    combine: C,
) -> T
where
    T: Send,
    V: Fn(&SegmentSieve<'_>) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    let seg = cfg.segment_len.max(1) as u64;
    let n_segments = x.div_ceil(seg);
    (0..n_segments)
        .into_par_iter()
        .map_init(
            || SegmentSieve::new(primes, y, big_y, want),
            |sieve, s| {
                let lo = 1 + s * seg;
                let hi = (lo + seg - 1).min(x);
                sieve.fill(lo, (hi - lo + 1) as usize);
                visit(sieve)
            },
        )
        .reduce(identity, &combine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes::primes_up_to;

    fn naive_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn kernel_matches_trial_division() {
        let primes = primes_up_to(1000);
        for &(y, big_y) in &[(u64::MAX, 5u64), (7, 3), (31, 5), (100, 10)] {
            let want = Want {
                lpf: true,
                omega: true,
                ultra: true,
            };
            let mut s = SegmentSieve::new(&primes, y, big_y, want);
            for &(lo, len) in &[(1u64, 500usize), (9_000, 777), (123_456, 300)] {
                s.fill(lo, len);
                for i in 0..len {
                    let e = s.element(i);
                    let f = naive_factor(e.n);
                    let smooth = f.iter().all(|&(p, _)| p <= y);
                    assert_eq!(e.smooth, smooth, "n={}", e.n);
                    if smooth {
                        assert_eq!(e.omega as usize, f.len(), "n={}", e.n);
                        let wy = f.iter().filter(|&&(p, _)| p <= big_y).count();
                        assert_eq!(e.omega_y as usize, wy, "n={}", e.n);
                        let ultra = f.iter().all(|&(p, k)| p.checked_pow(k).is_some_and(|q| q <= y));
                        assert_eq!(e.ultra, ultra, "n={}", e.n);
                    }
                    if y == u64::MAX {
                        let lpf = f.last().map_or(1, |&(p, _)| p);
                        assert_eq!(e.lpf, lpf, "n={}", e.n);
                    }
                }
            }
        }
    }
}
