//! Nonnegative quantities represented by their natural logarithm.
//!
//! Every count this crate manipulates is of size e^{O(M)} with M up to
//! thousands, so sums and products are carried out on the log scale.
//! `-inf` encodes zero.

use core::cmp::Ordering;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Mul, MulAssign};

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    log: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log: f64::NEG_INFINITY };
    pub const ONE: LogValue = LogValue { log: 0.0 };

    /// Wraps a natural logarithm.
    #[inline]
    pub fn from_ln(log: f64) -> Self {
        LogValue { log }
    }

    /// Represents `v >= 0` (zero maps to `-inf`).
    #[inline]
    pub fn from_value(v: f64) -> Self {
        debug_assert!(v >= 0.0);
        LogValue { log: math::ln(v) }
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.log
    }

    /// The represented value; overflows to `inf` / underflows to `0.0`
    /// outside f64 range.
    #[inline]
    pub fn value(self) -> f64 {
        math::exp(self.log)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.log == f64::NEG_INFINITY
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    #[inline]
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return LogValue::ZERO;
        }
        LogValue { log: self.log + rhs.log }
    }
}

impl MulAssign for LogValue {
    #[inline]
    fn mul_assign(&mut self, rhs: LogValue) {
        *self = *self * rhs;
    }
}

impl Add for LogValue {
    type Output = LogValue;
    /// Max-shifted log-sum-exp; the shifted exponent is always <= 0, so no
    /// overflow occurs however large the logs are.
    #[inline]
    fn add(self, rhs: LogValue) -> LogValue {
        let (hi, lo) = if self.log >= rhs.log { (self.log, rhs.log) } else { (rhs.log, self.log) };
        if lo == f64::NEG_INFINITY {
            return LogValue { log: hi };
        }
        LogValue { log: hi + math::ln_1p(math::exp(lo - hi)) }
    }
}

impl AddAssign for LogValue {
    #[inline]
    fn add_assign(&mut self, rhs: LogValue) {
        *self = *self + rhs;
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ZERO, |acc, v| acc + v)
    }
}

impl PartialOrd for LogValue {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log.partial_cmp(&other.log)
    }
}
