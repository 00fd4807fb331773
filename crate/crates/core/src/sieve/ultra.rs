use serde::Serialize;

/// Largest admissible exponent `v_p = floor(log y / log p)` for each prime
/// `p <= y`, found by integer powering so that `p^v = y` lands exactly.
#[derive(Clone, Debug, Serialize)]
pub struct UltraBoundTable {
    y: u64,
    primes: Vec<u64>,
    exponents: Vec<u32>,
}

/// `max { v : p^v <= y }` for `2 <= p <= y`.
pub fn max_exponent(p: u64, y: u64) -> u32 {
    debug_assert!(p >= 2 && p <= y);
    let mut v = 0;
    let mut pk: u64 = 1;
    while let Some(next) = pk.checked_mul(p) {
        if next > y {
            break;
        }
        pk = next;
        v += 1;
    }
    v
}

impl UltraBoundTable {
    pub fn new(y: u64, primes: &[u64]) -> Self {
        let primes: Vec<u64> = primes.iter().copied().take_while(|&p| p <= y).collect();
        let exponents = primes.iter().map(|&p| max_exponent(p, y)).collect();
        UltraBoundTable {
            y,
            primes,
            exponents,
        }
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// `v_p`, or `None` when `p` is not a stored prime.
    pub fn v(&self, p: u64) -> Option<u32> {
        self.primes
            .binary_search(&p)
            .ok()
            .map(|i| self.exponents[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.primes.iter().copied().zip(self.exponents.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes::primes_up_to;

    #[test]
    fn exact_power_boundaries() {
        assert_eq!(max_exponent(2, 4), 2);
        assert_eq!(max_exponent(2, 7), 2);
        assert_eq!(max_exponent(2, 8), 3);
        assert_eq!(max_exponent(3, 243), 5);
        assert_eq!(max_exponent(3, 242), 4);
        assert_eq!(max_exponent(10_007, 10_007), 1);
        assert_eq!(max_exponent(2, u64::MAX), 63);
    }

    #[test]
    fn bracket_invariant() {
        let y = 1000;
        let t = UltraBoundTable::new(y, &primes_up_to(y));
        for (p, v) in t.iter() {
            let pv = p.pow(v);
            assert!(pv <= y && pv * p > y, "p={p} v={v}");
        }
        assert_eq!(t.v(2), Some(9));
        assert_eq!(t.v(4), None);
    }
}
