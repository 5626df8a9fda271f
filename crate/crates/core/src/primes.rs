//! Sieve-backed prime store: membership, interval counts, bracketing
//! primes, and prime-reciprocal sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, out_of_range, Result};
use crate::math;

/// Hard cap on the sieve bound (memory: 4 bytes per integer).
const MAX_LIMIT: u64 = 1 << 31;

/// Immutable table of every prime up to `limit`, plus least-prime-factor
/// lookups for factoring. All queries are pure; construction is
/// single-threaded.
pub struct PrimeTable {
    limit: u64,
    /// `spf[n]` is the smallest prime factor of n (n in 2..=limit);
    /// `spf[p] == p` exactly when p is prime.
    spf: Vec<u32>,
    primes: Vec<u64>,
}

/// Consecutive primes around a real cut point: `lower < y <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bracketing {
    pub lower: u64,
    pub upper: u64,
    /// 1-based index m with p_m = lower.
    pub index: usize,
}

/// Exact Σ 1/p over primes in [a, b], with the ln ln b − ln ln a companion
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecipSum {
    pub sum: f64,
    pub log_log_estimate: f64,
}

impl PrimeTable {
    /// Builds the least-prime-factor sieve up to `limit` (inclusive).
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(domain("prime table limit must be at least 2"));
        }
        if limit > MAX_LIMIT {
            return Err(out_of_range("prime table limit exceeds 2^31"));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut i = 2usize;
        while i * i <= n {
            if spf[i] == 0 {
                let mut j = i * i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        let mut primes = Vec::new();
        for (k, slot) in spf.iter_mut().enumerate().skip(2) {
            if *slot == 0 {
                *slot = k as u32;
                primes.push(k as u64);
            }
        }
        Ok(PrimeTable { limit, spf, primes })
    }

    #[inline]
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes <= limit, sorted.
    #[inline]
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The n-th prime, 1-based (p_1 = 2).
    pub fn nth_prime(&self, n: usize) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.primes.get(n - 1).copied()
    }

    /// Smallest prime factor of n, for 2 <= n <= limit.
    #[inline]
    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Deterministic trial-division primality check, independent of the
    /// sieve. Verification only; the sieve is authoritative.
    pub fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    /// Number of primes p <= x.
    pub fn count_le(&self, x: f64) -> u64 {
        self.primes.partition_point(|&p| (p as f64) <= x) as u64
    }

    /// Exact number of primes in the half-open interval (lo, hi].
    pub fn count_primes_in(&self, lo: f64, hi: f64) -> Result<u64> {
        if !(0.0 <= lo && lo <= hi) {
            return Err(domain("count_primes_in requires 0 <= lo <= hi"));
        }
        if hi > self.limit as f64 {
            return Err(out_of_range("count_primes_in: hi exceeds table limit"));
        }
        Ok(self.count_le(hi) - self.count_le(lo))
    }

    /// Consecutive primes p_m < y <= p_{m+1}.
    pub fn bracketing(&self, y: f64) -> Result<Bracketing> {
        if y <= 2.0 {
            return Err(domain("bracketing requires y > 2"));
        }
        let last = *self.primes.last().expect("table has primes");
        if y > last as f64 {
            return Err(out_of_range("bracketing: y beyond largest prime in table"));
        }
        // m = number of primes strictly below y
        let m = self.primes.partition_point(|&p| (p as f64) < y);
        Ok(Bracketing { lower: self.primes[m - 1], upper: self.primes[m], index: m })
    }

    /// Σ 1/p over primes in the closed interval [a, b], plus the
    /// ln ln b − ln ln a estimate.
    pub fn reciprocal_sum(&self, a: f64, b: f64) -> Result<RecipSum> {
        if !(2.0 <= a && a <= b) {
            return Err(domain("reciprocal_sum requires 2 <= a <= b"));
        }
        if b > self.limit as f64 {
            return Err(out_of_range("reciprocal_sum: b exceeds table limit"));
        }
        let start = self.primes.partition_point(|&p| (p as f64) < a);
        let end = self.primes.partition_point(|&p| (p as f64) <= b);
        let sum: f64 = self.primes[start..end].iter().map(|&p| 1.0 / p as f64).sum();
        Ok(RecipSum { sum, log_log_estimate: math::ln(math::ln(b)) - math::ln(math::ln(a)) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_limit() {
        assert!(PrimeTable::build(1).is_err());
    }

    #[test]
    fn first_primes() {
        let t = PrimeTable::build(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.nth_prime(4), Some(7));
        assert_eq!(t.nth_prime(0), None);
    }

    #[test]
    fn pi_of_100_and_million() {
        let t = PrimeTable::build(1_000_000).unwrap();
        assert_eq!(t.count_le(100.0), 25);
        assert_eq!(t.primes().len(), 78_498);
    }

    #[test]
    fn smallest_factor_marks_primes() {
        let t = PrimeTable::build(1000).unwrap();
        for n in 2..=1000u64 {
            let spf = t.smallest_factor(n).unwrap();
            assert_eq!(n % spf, 0);
            assert_eq!(spf == n, PrimeTable::trial_division_is_prime(n));
        }
    }

    #[test]
    fn interval_counts() {
        let t = PrimeTable::build(1000).unwrap();
        // primes in (100/e, 100]
        assert_eq!(t.count_primes_in(100.0 / math::E, 100.0).unwrap(), 14);
        assert_eq!(t.count_primes_in(0.0, 2.0).unwrap(), 1);
        assert_eq!(t.count_primes_in(7.0, 7.0).unwrap(), 0);
        assert!(t.count_primes_in(0.0, 2000.0).is_err());
    }

    #[test]
    fn interval_count_agrees_with_scan() {
        // two independent routes: binary search vs direct spf scan
        let t = PrimeTable::build(5000).unwrap();
        let cases = [(2.0, 3.0), (10.0, 97.0), (36.8, 100.0), (999.0, 4999.0), (4999.0, 5000.0)];
        for (lo, hi) in cases {
            let by_search = t.count_primes_in(lo, hi).unwrap();
            let mut by_scan = 0;
            for n in 2..=5000u64 {
                if t.spf[n as usize] as u64 == n && lo < n as f64 && n as f64 <= hi {
                    by_scan += 1;
                }
            }
            assert_eq!(by_search, by_scan, "interval ({lo}, {hi}]");
        }
    }

    #[test]
    fn bracketing_examples() {
        let t = PrimeTable::build(1000).unwrap();
        let b = t.bracketing(10.0).unwrap();
        assert_eq!((b.lower, b.upper, b.index), (7, 11, 4));
        // boundary y = p_{m+1} stays on the right
        let b = t.bracketing(11.0).unwrap();
        assert_eq!((b.lower, b.upper, b.index), (7, 11, 4));
        let b = t.bracketing(100.0).unwrap();
        assert_eq!((b.lower, b.upper, b.index), (97, 101, 25));
        assert!(t.bracketing(2.0).is_err());
        assert!(t.bracketing(1e9).is_err());
    }

    #[test]
    fn reciprocal_sums() {
        let t = PrimeTable::build(1_000_000).unwrap();
        let r = t.reciprocal_sum(2.0, 2.0).unwrap();
        assert_eq!(r.sum, 0.5);
        let r = t.reciprocal_sum(2.0, 10.0).unwrap();
        let expected = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((r.sum - expected).abs() < 1e-15);
        // estimate over [sqrt(x), x] equals ln 2 for any x
        let r = t.reciprocal_sum(1000.0, 1_000_000.0).unwrap();
        assert!((r.log_log_estimate - math::LN_2).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_sum_stays_under_estimate_with_slack() {
        let t = PrimeTable::build(1_000_000).unwrap();
        for x in [1_000u64, 10_000, 100_000, 1_000_000] {
            let a = math::sqrt(x as f64);
            let r = t.reciprocal_sum(a, x as f64).unwrap();
            assert!(
                r.sum < r.log_log_estimate + 0.05,
                "x={x}: sum {} vs estimate {}",
                r.sum,
                r.log_log_estimate
            );
        }
    }
}
