/// All primes `<= limit`, ascending. Odd-only sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // odd numbers 3, 5, ..., index i <-> 2i+3
    let mut composite = vec![false; half];
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !composite[i] {
            let mut j = ((p * p - 3) / 2) as usize;
            while j < half {
                composite[j] = true;
                j += p as usize;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_pi(limit));
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 3),
    );
    out
}

fn estimate_pi(n: u64) -> usize {
    if n < 17 {
        return 8;
    }
    let nf = n as f64;
    (1.26 * nf / nf.ln()) as usize
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Ascending primes up to a bound, with a prime-counting lookup.
///
/// `pi` is a dense table when the bound is small enough, otherwise a binary
/// search over `primes`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    dense_pi: Option<Vec<u32>>,
}

const DENSE_PI_LIMIT: u64 = 1 << 26;

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let primes = primes_up_to(limit);
        let dense_pi = (limit <= DENSE_PI_LIMIT).then(|| {
            let mut pi = vec![0u32; limit as usize + 1];
            let mut count = 0u32;
            let mut next = primes.iter().peekable();
            for (n, slot) in pi.iter_mut().enumerate() {
                if next.peek().is_some_and(|&&p| p == n as u64) {
                    count += 1;
                    next.next();
                }
                *slot = count;
            }
            pi
        });
        PrimeTable {
            limit,
            primes,
            dense_pi,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound`; `bound` must not exceed `limit`.
    pub fn primes_to(&self, bound: u64) -> &[u64] {
        &self.primes[..self.pi(bound)]
    }

    /// Number of primes `<= n`, for `n <= limit`.
    pub fn pi(&self, n: u64) -> usize {
        assert!(n <= self.limit, "pi({n}) beyond table limit {}", self.limit);
        match &self.dense_pi {
            Some(t) => t[n as usize] as usize,
            None => self.primes.partition_point(|&p| p <= n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(3), vec![2, 3]);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        let t = PrimeTable::new(10_000);
        assert_eq!(t.pi(10_000), 1229);
        assert_eq!(t.pi(1), 0);
        assert_eq!(t.pi(2), 1);
        assert_eq!(t.pi(100), 25);
    }

    #[test]
    fn isqrt_boundaries() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 99, 100, u64::MAX] {
            let r = isqrt(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
    }
}
