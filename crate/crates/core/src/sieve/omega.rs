//! Prime-divisor counts by trial division, independent of any table.

/// `#{p prime : p | n, p <= t}`; `omega_t(1, t) = 0`.
pub fn omega_t(n: u64, t: u64) -> u32 {
    assert!(n >= 1, "omega_t needs n >= 1");
    let mut m = n;
    let mut count = 0;
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            if d <= t {
                count += 1;
            }
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 && m <= t {
        count += 1;
    }
    count
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    omega_t(n, u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(omega(12), 2);
        assert_eq!(omega(1), 0);
        assert_eq!(omega_t(30, 3), 2);
        assert_eq!(omega_t(30, 5), 3);
        assert_eq!(omega(2 * 3 * 5 * 7 * 11 * 13), 6);
        assert_eq!(omega(1 << 40), 1);
    }
}
