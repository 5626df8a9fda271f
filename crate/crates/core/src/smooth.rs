//! Exact ψ(x,y) by two independent methods, plus the directly computable
//! square-root-scale upper bounds.

use alloc::collections::BTreeMap;
use alloc::format;

use crate::error::{domain, out_of_range, Error, Result};
use crate::logvalue::LogValue;
use crate::math;
use crate::primes::PrimeTable;

/// Which integers ψ counts.
///
/// The recurrences and the y >= x identity are exact under `Inclusive`
/// (largest prime factor <= y, k = 1 included), which is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// largest prime factor <= y, counting k = 1.
    Inclusive,
    /// largest prime factor < y, counting k = 1.
    Strict,
    /// largest prime factor <= y, starting from k = 2.
    FromTwo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothQuery {
    pub x: u64,
    pub y: f64,
    pub convention: Convention,
}

impl SmoothQuery {
    pub fn new(x: u64, y: f64) -> Self {
        SmoothQuery { x, y, convention: Convention::Inclusive }
    }

    pub fn with_convention(x: u64, y: f64, convention: Convention) -> Self {
        SmoothQuery { x, y, convention }
    }

    fn validate(&self) -> Result<()> {
        if self.x < 1 {
            return Err(domain("smooth query requires x >= 1"));
        }
        if !(self.y >= 2.0) {
            return Err(domain("smooth query requires y >= 2"));
        }
        Ok(())
    }
}

/// Largest prime factor of k (k >= 2), via repeated smallest-factor lookups.
fn largest_prime_factor(table: &PrimeTable, mut k: u64) -> u64 {
    let mut largest = 0;
    while k > 1 {
        let p = table.smallest_factor(k).expect("k within sieve");
        if p > largest {
            largest = p;
        }
        while k.is_multiple_of(p) {
            k /= p;
        }
    }
    largest
}

/// Brute-force ψ: factors every k <= x through the sieve.
pub fn psi_naive(table: &PrimeTable, q: &SmoothQuery) -> Result<u64> {
    q.validate()?;
    if q.x > table.limit() {
        return Err(out_of_range(format!(
            "psi_naive needs x <= table limit ({} > {})",
            q.x,
            table.limit()
        )));
    }
    let mut count = match q.convention {
        Convention::Inclusive | Convention::Strict => 1, // k = 1
        Convention::FromTwo => 0,
    };
    for k in 2..=q.x {
        let lpf = largest_prime_factor(table, k) as f64;
        let smooth = match q.convention {
            Convention::Inclusive | Convention::FromTwo => lpf <= q.y,
            Convention::Strict => lpf < q.y,
        };
        if smooth {
            count += 1;
        }
    }
    Ok(count)
}

/// Memo store for the prime-power recursion, shareable across queries with
/// different x and y. Keys are (⌊x⌋, prime index); values are inclusive
/// counts.
pub struct PsiCache {
    memo: BTreeMap<(u64, u32), u64>,
    pub max_entries: usize,
}

impl Default for PsiCache {
    fn default() -> Self {
        Self::new()
    }
}

impl PsiCache {
    pub fn new() -> Self {
        PsiCache { memo: BTreeMap::new(), max_entries: 4_000_000 }
    }

    pub fn with_budget(max_entries: usize) -> Self {
        PsiCache { memo: BTreeMap::new(), max_entries }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }
}

/// ψ by the prime-power recursion
/// ψ(x, p_{k+1}) = Σ_j ψ(x / p_{k+1}^j, p_k), memoized on (⌊x⌋, k).
///
/// Two value-preserving shortcuts keep the memo small: ψ(x, p) = ⌊x⌋ when
/// p >= x, and for p² >= x the one-large-prime closed form
/// ⌊x⌋ − Σ_{p < q <= x} ⌊x/q⌋ (every non-smooth n <= x has exactly one
/// prime factor above √x).
pub fn psi_recursive(table: &PrimeTable, q: &SmoothQuery, cache: &mut PsiCache) -> Result<u64> {
    q.validate()?;
    let x = q.x;
    let xf = x as f64;
    match q.convention {
        Convention::Inclusive => {
            if q.y >= xf {
                return Ok(x);
            }
            let k = top_index_le(table, q.y)?;
            psi_inclusive(table, x, k, cache)
        }
        Convention::FromTwo => {
            if q.y >= xf {
                return Ok(x - 1);
            }
            let k = top_index_le(table, q.y)?;
            Ok(psi_inclusive(table, x, k, cache)? - 1)
        }
        Convention::Strict => {
            if q.y > xf {
                return Ok(x);
            }
            // largest prime strictly below y
            let m = table.primes().partition_point(|&p| (p as f64) < q.y);
            if m == 0 {
                return Ok(1); // only k = 1 has all factors < 2
            }
            if q.y > table.limit() as f64 {
                return Err(out_of_range("psi_recursive: y beyond table"));
            }
            psi_inclusive(table, x, m - 1, cache)
        }
    }
}

/// Convenience wrapper with a fresh cache.
pub fn psi_recursive_fresh(table: &PrimeTable, q: &SmoothQuery) -> Result<u64> {
    psi_recursive(table, q, &mut PsiCache::new())
}

/// Index (0-based) of the largest prime <= y.
fn top_index_le(table: &PrimeTable, y: f64) -> Result<usize> {
    if y > table.limit() as f64 {
        return Err(out_of_range("psi_recursive: y beyond table limit"));
    }
    let m = table.primes().partition_point(|&p| (p as f64) <= y);
    if m == 0 {
        return Err(domain("no prime <= y"));
    }
    Ok(m - 1)
}

/// Inclusive ψ(x, p_k) with p indexed 0-based into the table.
fn psi_inclusive(table: &PrimeTable, x: u64, k: usize, cache: &mut PsiCache) -> Result<u64> {
    if x == 0 {
        return Ok(0);
    }
    let p = table.primes()[k];
    if p >= x {
        return Ok(x); // every 2 <= n <= x has all prime factors <= n <= p
    }
    if k == 0 {
        // powers of two up to x
        return Ok(x.ilog2() as u64 + 1);
    }
    let key = (x, k as u32);
    if let Some(&v) = cache.memo.get(&key) {
        return Ok(v);
    }
    let val = if p.saturating_mul(p) >= x && x <= table.limit() {
        // all non-smooth n <= x carry exactly one prime factor q in (p, x]
        let primes = table.primes();
        let hi = primes.partition_point(|&q| q <= x);
        let mut non_smooth = 0u64;
        for &qp in &primes[k + 1..hi] {
            non_smooth += x / qp;
        }
        x - non_smooth
    } else {
        let mut sum = 0u64;
        let mut pj = 1u64;
        loop {
            sum += psi_inclusive(table, x / pj, k - 1, cache)?;
            match pj.checked_mul(p) {
                Some(next) if next <= x => pj = next,
                _ => break,
            }
        }
        sum
    };
    if cache.memo.len() >= cache.max_entries {
        return Err(Error::Resource {
            what: format!("psi memo exceeded {} entries", cache.max_entries),
            partial: None,
        });
    }
    cache.memo.insert(key, val);
    Ok(val)
}

/// ψ(x, √x)/x under the inclusive convention; callers compare against
/// ln(e/2) ≈ 0.306853.
pub fn half_smooth_fraction(table: &PrimeTable, x: u64) -> Result<f64> {
    if x < 4 {
        return Err(domain("half_smooth_fraction requires x >= 4"));
    }
    let q = SmoothQuery::new(x, math::sqrt(x as f64));
    let psi = psi_naive(table, &q)?;
    Ok(psi as f64 / x as f64)
}

/// The two square-root-scale upper bounds on ψ(x, p_k) where p_k is the
/// smallest prime >= y: the prime-product form and the
/// √x·exp{C√p_k/ln p_k} form with a caller-supplied constant C.
#[derive(Debug, Clone, Copy)]
pub struct SqrtUpperBounds {
    pub product_bound: LogValue,
    pub exp_bound: LogValue,
    pub p_k: u64,
}

pub fn psi_sqrt_upper(table: &PrimeTable, x: u64, y: f64, c_const: f64) -> Result<SqrtUpperBounds> {
    if x < 2 {
        return Err(domain("psi_sqrt_upper requires x >= 2"));
    }
    let primes = table.primes();
    let idx = primes.partition_point(|&p| (p as f64) < y);
    let p_k = *primes.get(idx).ok_or_else(|| out_of_range("no prime >= y in table"))?;
    let half_ln_x = 0.5 * math::ln(x as f64);
    // sqrt(x) / (ln2 · Π_{j=2..k} (1 − 1/√p_j))
    let mut log_prod = half_ln_x - math::ln(math::LN_2);
    for &p in &primes[1..=idx] {
        log_prod -= math::ln_1p(-1.0 / math::sqrt(p as f64));
    }
    let pf = p_k as f64;
    let log_exp = half_ln_x + c_const * math::sqrt(pf) / math::ln(pf);
    Ok(SqrtUpperBounds {
        product_bound: LogValue::from_ln(log_prod),
        exp_bound: LogValue::from_ln(log_exp),
        p_k,
    })
}
