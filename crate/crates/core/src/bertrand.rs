//! Exhaustive prime-gap verification over (y, γy) intervals, and the
//! modeled ln ψ used in the gap argument.

use alloc::vec::Vec;

use crate::error::{domain, out_of_range, Result};
use crate::iterlog::XYQuery;
use crate::math;
use crate::primes::PrimeTable;

/// Smallest prime strictly inside (y, γy), if any.
pub fn prime_in_interval(table: &PrimeTable, y: f64, gamma: f64) -> Result<Option<u64>> {
    if !(gamma > 1.0) {
        return Err(domain("prime_in_interval requires gamma > 1"));
    }
    let hi = gamma * y;
    if hi > table.limit() as f64 + 1.0 {
        return Err(out_of_range("prime_in_interval: gamma*y exceeds table"));
    }
    let primes = table.primes();
    let idx = primes.partition_point(|&p| (p as f64) <= y);
    match primes.get(idx) {
        Some(&p) if (p as f64) < hi => Ok(Some(p)),
        _ => Ok(None),
    }
}

/// Every y in [y_lo, y_hi] with no prime in (y, γy). An empty list verifies
/// the gap property on the whole range.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub gamma: f64,
    pub y_lo: u64,
    pub y_hi: u64,
    pub failures: Vec<u64>,
}

pub fn scan(table: &PrimeTable, y_lo: u64, y_hi: u64, gamma: f64) -> Result<ScanReport> {
    if !(gamma > 1.0) {
        return Err(domain("scan requires gamma > 1"));
    }
    if gamma * y_hi as f64 > table.limit() as f64 + 1.0 {
        return Err(out_of_range("scan: gamma*y_hi exceeds table limit"));
    }
    let primes = table.primes();
    let mut failures = Vec::new();
    let mut idx = primes.partition_point(|&p| p <= y_lo);
    for y in y_lo..=y_hi {
        while idx < primes.len() && primes[idx] <= y {
            idx += 1;
        }
        let ok = match primes.get(idx) {
            Some(&p) => (p as f64) < gamma * y as f64,
            None => false,
        };
        if !ok {
            failures.push(y);
        }
    }
    Ok(ScanReport { gamma, y_lo, y_hi, failures })
}

/// Modeled ln ψ_a(x, y) = u[ln y + ln⁽²⁾y + ln⁽³⁾y − ln⁽²⁾x − ln⁽³⁾x −
/// ln⁽⁴⁾x + a].
pub fn psi_model(q: &XYQuery, a: f64) -> f64 {
    let l2x = math::ln(q.ln_x());
    let l3x = math::ln(l2x);
    let l4x = math::ln(l3x);
    let l2y = math::ln(q.ln_y());
    let l3y = math::ln(l2y);
    q.u() * (q.ln_y() + l2y + l3y - l2x - l3x - l4x + a)
}
