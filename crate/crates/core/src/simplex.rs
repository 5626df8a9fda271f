//! Reduced-order simplex machinery: interval decomposition of the prime
//! range, lattice-point enumeration, and the rigorous lower/upper sandwich
//! sums for restricted smooth counts.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, out_of_range, Error, Result};
use crate::logvalue::LogValue;
use crate::math;
use crate::primes::PrimeTable;

/// Tolerance around the undefined knife edge ln y = ⌊ln y⌋ + ln 2.
const R_RULE_EDGE: f64 = 1e-9;

/// Default cap on lattice visits per enumeration.
pub const DEFAULT_VISIT_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// m_i = exact prime count of J_i; the only mode with rigorous bounds.
    ExactWeights,
    /// m_i = (e−1)y/((ln y − i)e^i), the prime-counting approximation.
    PntWeights,
}

/// Choice of the interval count r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RRule {
    /// r = ⌊ln y⌋ for every y (the default). All simplex coefficients stay
    /// positive, at the price of leaving the single prime 2 outside the
    /// decomposition when ln y − ⌊ln y⌋ > ln 2.
    Floor,
    /// r = ⌊ln y⌋ or ⌊ln y⌋ + 1 depending on which side of ln 2 the
    /// fractional part falls. In the second case the last upper coefficient
    /// is negative and the upper simplex is unbounded; no bounds are
    /// asserted for this rule.
    TwoCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Coefficients ln y − i + 1: every lattice point certifies smooth
    /// integers, so the sum is a lower bound.
    Lower,
    /// Coefficients ln y − i: every restricted smooth integer maps into
    /// this simplex, so the sum is an upper bound.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerForm {
    /// Σ ∏ m^z / z!
    Poisson,
    /// Σ ∏ f(z, m) with f the composition count; tighter, still a lower
    /// bound for the restricted count.
    ExactK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperForm {
    /// Σ ∏ f(z, m)
    ExactK,
    /// Σ ∏ (m^z / z!) e^{z²/2m}; relaxes the rising-factorial product.
    PBound,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<u64>),
    Pnt(Vec<f64>),
}

impl Weights {
    pub fn len(&self) -> usize {
        match self {
            Weights::Exact(v) => v.len(),
            Weights::Pnt(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, i: usize) -> f64 {
        match self {
            Weights::Exact(v) => v[i] as f64,
            Weights::Pnt(v) => v[i],
        }
    }
}

/// The (x, y) query decomposed over the intervals J_i = (y/e^i, y/e^{i-1}],
/// i = 1..r, with per-interval weights and the budget ln x.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSimplex {
    pub x: u64,
    pub y: f64,
    pub r: usize,
    pub rule: RRule,
    pub mode: WeightMode,
    /// ln y − i + 1 for i = 1..r
    pub coeff_lower: Vec<f64>,
    /// ln y − i for i = 1..r
    pub coeff_upper: Vec<f64>,
    pub weights: Weights,
    /// ln x
    pub budget: f64,
}

impl ReducedSimplex {
    /// The prime interval (lo, hi] the decomposition covers.
    pub fn restricted_interval(&self) -> (f64, f64) {
        (self.y / math::exp(self.r as f64), self.y)
    }
}

pub fn build_reduced(
    table: &PrimeTable,
    x: u64,
    y: f64,
    mode: WeightMode,
) -> Result<ReducedSimplex> {
    build_reduced_with_rule(table, x, y, mode, RRule::Floor)
}

pub fn build_reduced_with_rule(
    table: &PrimeTable,
    x: u64,
    y: f64,
    mode: WeightMode,
    rule: RRule,
) -> Result<ReducedSimplex> {
    if x < 2 {
        return Err(domain("reduced simplex requires x >= 2"));
    }
    if !(2.0 <= y) {
        return Err(domain("reduced simplex requires y >= 2"));
    }
    if y > table.limit() as f64 {
        return Err(out_of_range("reduced simplex: y exceeds table limit"));
    }
    let ln_y = math::ln(y);
    let fl = math::floor(ln_y);
    if (ln_y - (fl + math::LN_2)).abs() < R_RULE_EDGE {
        return Err(domain("ln y sits on the undefined boundary ⌊ln y⌋ + ln 2"));
    }
    let r = match rule {
        RRule::Floor => fl as usize,
        RRule::TwoCase => {
            if ln_y < fl + math::LN_2 {
                fl as usize
            } else {
                fl as usize + 1
            }
        }
    };
    let mut coeff_lower = Vec::with_capacity(r);
    let mut coeff_upper = Vec::with_capacity(r);
    for i in 1..=r {
        coeff_lower.push(ln_y - i as f64 + 1.0);
        coeff_upper.push(ln_y - i as f64);
    }
    let weights = match mode {
        WeightMode::ExactWeights => {
            let mut m = Vec::with_capacity(r);
            for i in 1..=r {
                let lo = y / math::exp(i as f64);
                let hi = y / math::exp(i as f64 - 1.0);
                m.push(table.count_primes_in(lo, hi)?);
            }
            Weights::Exact(m)
        }
        WeightMode::PntWeights => {
            let mut m = Vec::with_capacity(r);
            for i in 1..=r {
                m.push((math::E - 1.0) * y / ((ln_y - i as f64) * math::exp(i as f64)));
            }
            Weights::Pnt(m)
        }
    };
    Ok(ReducedSimplex {
        x,
        y,
        r,
        rule,
        mode,
        coeff_lower,
        coeff_upper,
        weights,
        budget: math::ln(x as f64),
    })
}

/// Number of ways to write k as an ordered sum of m nonnegative integers:
/// C(k+m−1, k), as a log value via lgamma. m = 0 degenerates to [k == 0].
pub fn compositions_int(k: u64, m: u64) -> LogValue {
    if m == 0 {
        return if k == 0 { LogValue::ONE } else { LogValue::ZERO };
    }
    let (k, m) = (k as f64, m as f64);
    LogValue::from_ln(math::ln_gamma(k + m) - math::ln_gamma(m) - math::ln_gamma(k + 1.0))
}

/// The Γ-continued composition count for real m >= 1.
pub fn compositions(k: u64, m: f64) -> Result<LogValue> {
    if !(m >= 1.0) {
        return Err(domain("compositions requires m >= 1"));
    }
    let k = k as f64;
    Ok(LogValue::from_ln(math::ln_gamma(k + m) - math::ln_gamma(m) - math::ln_gamma(k + 1.0)))
}

/// ∏ f(z_i, m_i): the number of prime-exponent vectors with the given
/// interval signature.
pub fn signature_count(z: &[u64], weights: &Weights) -> Result<LogValue> {
    if z.len() != weights.len() {
        return Err(domain("signature_count: z and weights lengths differ"));
    }
    let mut acc = LogValue::ONE;
    for (i, &zi) in z.iter().enumerate() {
        let term = match weights {
            Weights::Exact(m) => compositions_int(zi, m[i]),
            Weights::Pnt(m) => compositions(zi, m[i])?,
        };
        if term.is_zero() {
            return Ok(LogValue::ZERO);
        }
        acc *= term;
    }
    Ok(acc)
}

fn side_coeffs(s: &ReducedSimplex, side: Side) -> &[f64] {
    match side {
        Side::Lower => &s.coeff_lower,
        Side::Upper => &s.coeff_upper,
    }
}

/// Depth-first walk of every nonnegative lattice point z with
/// Σ coeff_i z_i < budget (strict). Returns the visit count; errors if it
/// would exceed `cap` (partial count reported) or the simplex is unbounded.
pub fn enumerate_lattice(
    s: &ReducedSimplex,
    side: Side,
    cap: u64,
    mut visit: impl FnMut(&[u64]),
) -> Result<u64> {
    let coeffs = side_coeffs(s, side);
    enumerate_raw(coeffs, s.budget, cap, &mut visit)
}

/// Enumeration over explicit coefficients; shared by the simplex and test
/// oracles.
pub fn enumerate_raw(
    coeffs: &[f64],
    budget: f64,
    cap: u64,
    visit: &mut impl FnMut(&[u64]),
) -> Result<u64> {
    if !budget.is_finite() {
        return Err(domain("enumeration budget must be finite"));
    }
    if coeffs.iter().any(|&c| c <= 0.0) {
        return Err(domain("nonpositive simplex coefficient: lattice is unbounded"));
    }
    let mut z = alloc::vec![0u64; coeffs.len()];
    let mut count = 0u64;
    fn walk(
        coeffs: &[f64],
        budget: f64,
        cap: u64,
        i: usize,
        z: &mut [u64],
        count: &mut u64,
        visit: &mut impl FnMut(&[u64]),
    ) -> Result<()> {
        if i == coeffs.len() {
            if *count >= cap {
                return Err(Error::Resource {
                    what: format!("lattice visit cap {cap} reached"),
                    partial: Some(*count),
                });
            }
            *count += 1;
            visit(z);
            return Ok(());
        }
        let mut zi = 0u64;
        while coeffs[i] * (zi as f64) < budget {
            z[i] = zi;
            walk(coeffs, budget - coeffs[i] * zi as f64, cap, i + 1, z, count, visit)?;
            zi += 1;
        }
        z[i] = 0;
        Ok(())
    }
    walk(coeffs, budget, cap, 0, &mut z, &mut count, visit)?;
    Ok(count)
}

fn lattice_logsum(
    coeffs: &[f64],
    budget: f64,
    cap: u64,
    term: impl Fn(&[u64]) -> f64,
) -> Result<LogValue> {
    let mut acc = LogValue::ZERO;
    enumerate_raw(coeffs, budget, cap, &mut |z| {
        acc += LogValue::from_ln(term(z));
    })?;
    Ok(acc)
}

fn log_poisson_term(z: &[u64], w: &Weights) -> f64 {
    let mut t = 0.0;
    for (i, &zi) in z.iter().enumerate() {
        if zi > 0 {
            t += zi as f64 * math::ln(w.get(i)) - math::ln_factorial(zi);
        }
    }
    t
}

fn log_exact_k_term(z: &[u64], w: &Weights) -> f64 {
    let mut t = 0.0;
    for (i, &zi) in z.iter().enumerate() {
        let m = w.get(i);
        if m == 0.0 {
            if zi > 0 {
                return f64::NEG_INFINITY;
            }
            continue;
        }
        t += math::ln_gamma(m + zi as f64) - math::ln_gamma(m) - math::ln_factorial(zi);
    }
    t
}

/// Lower sandwich sum over the (ln y − i + 1)-simplex. With exact weights,
/// e^result <= the count of integers <= x whose prime factors all lie in
/// the decomposition interval.
pub fn psi_lower(s: &ReducedSimplex, form: LowerForm, cap: u64) -> Result<LogValue> {
    let coeffs = side_coeffs(s, Side::Lower);
    match form {
        LowerForm::Poisson => {
            lattice_logsum(coeffs, s.budget, cap, |z| log_poisson_term(z, &s.weights))
        }
        LowerForm::ExactK => {
            lattice_logsum(coeffs, s.budget, cap, |z| log_exact_k_term(z, &s.weights))
        }
    }
}

/// Upper sandwich sum over the (ln y − i)-simplex. With exact weights,
/// e^result >= the count of integers <= x whose prime factors all lie in
/// the decomposition interval.
pub fn psi_upper(s: &ReducedSimplex, form: UpperForm, cap: u64) -> Result<LogValue> {
    let coeffs = side_coeffs(s, Side::Upper);
    match form {
        UpperForm::ExactK => {
            lattice_logsum(coeffs, s.budget, cap, |z| log_exact_k_term(z, &s.weights))
        }
        UpperForm::PBound => lattice_logsum(coeffs, s.budget, cap, |z| {
            let mut t = 0.0;
            for (i, &zi) in z.iter().enumerate() {
                let m = s.weights.get(i);
                if zi > 0 {
                    if m == 0.0 {
                        return f64::NEG_INFINITY;
                    }
                    t += zi as f64 * math::ln(m) - math::ln_factorial(zi)
                        + (zi * zi) as f64 / (2.0 * m);
                }
            }
            t
        }),
    }
}

/// Dedicated oracle: count of integers k <= x (k = 1 included) all of whose
/// prime factors lie in (lo, hi]. Factors every k through the sieve.
pub fn psi_restricted_naive(table: &PrimeTable, x: u64, lo: f64, hi: f64) -> Result<u64> {
    if x > table.limit() {
        return Err(out_of_range("psi_restricted_naive: x exceeds table limit"));
    }
    let mut count = 1u64; // k = 1 has no prime factors
    for k in 2..=x {
        let mut n = k;
        let mut ok = true;
        while n > 1 {
            let p = table.smallest_factor(n).expect("within sieve");
            let pf = p as f64;
            if !(lo < pf && pf <= hi) {
                ok = false;
                break;
            }
            while n % p == 0 {
                n /= p;
            }
        }
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::PrimeTable;
    use crate::smooth::{psi_naive, SmoothQuery};

    fn table() -> PrimeTable {
        PrimeTable::build(100_000).unwrap()
    }

    #[test]
    fn r_rule_examples() {
        let t = table();
        let s = build_reduced(&t, 10_000, 100.0, WeightMode::ExactWeights).unwrap();
        assert_eq!(s.r, 4); // ln 100 ≈ 4.605 < 4 + ln 2
        match &s.weights {
            Weights::Exact(m) => assert_eq!(m[0], 14), // primes in (100/e, 100]
            _ => unreachable!(),
        }
        // two-case rule at y = 120 (fractional part above ln 2)
        let s2 =
            build_reduced_with_rule(&t, 10_000, 120.0, WeightMode::ExactWeights, RRule::TwoCase)
                .unwrap();
        assert_eq!(s2.r, 5);
        let s2f = build_reduced(&t, 10_000, 120.0, WeightMode::ExactWeights).unwrap();
        assert_eq!(s2f.r, 4);
    }

    #[test]
    fn knife_edge_is_rejected() {
        let t = table();
        let y = math::exp(4.0 + math::LN_2); // ln y = 4 + ln 2 exactly
        assert!(build_reduced(&t, 100, y, WeightMode::ExactWeights).is_err());
    }

    #[test]
    fn pnt_weight_value() {
        let t = table();
        let s = build_reduced(&t, 10_000, 100.0, WeightMode::PntWeights).unwrap();
        match &s.weights {
            Weights::Pnt(m) => {
                let expect = (math::E - 1.0) * 100.0 / ((math::ln(100.0) - 1.0) * math::E);
                assert!((m[0] - expect).abs() < 1e-12);
                assert!((m[0] - 17.53).abs() < 0.01);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn weights_sum_to_interval_count() {
        let t = table();
        for y in [30.0, 60.0, 100.0, 120.0, 977.0] {
            let s = build_reduced(&t, 1000, y, WeightMode::ExactWeights).unwrap();
            let (lo, hi) = s.restricted_interval();
            let total: u64 = match &s.weights {
                Weights::Exact(m) => m.iter().sum(),
                _ => unreachable!(),
            };
            assert_eq!(total, t.count_primes_in(lo, hi).unwrap());
        }
    }

    #[test]
    fn interval_coefficients_bracket_prime_logs() {
        let t = table();
        for y in [30.0f64, 60.0, 100.0, 120.0] {
            let s = build_reduced(&t, 1000, y, WeightMode::ExactWeights).unwrap();
            for i in 1..=s.r {
                let lo = y / math::exp(i as f64);
                let hi = y / math::exp(i as f64 - 1.0);
                for &p in t.primes() {
                    let pf = p as f64;
                    if lo < pf && pf <= hi {
                        let lp = math::ln(pf);
                        assert!(s.coeff_upper[i - 1] < lp, "y={y} i={i} p={p}");
                        if i < s.r {
                            assert!(lp < s.coeff_lower[i - 1], "y={y} i={i} p={p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composition_counts() {
        assert!((compositions_int(2, 3).value() - 6.0).abs() < 1e-9);
        assert!((compositions_int(0, 5).value() - 1.0).abs() < 1e-12);
        assert!((compositions_int(3, 2).value() - 4.0).abs() < 1e-9);
        assert!(compositions_int(1, 0).is_zero());
        assert_eq!(compositions_int(0, 0).value(), 1.0);
        assert!(compositions(2, 0.5).is_err());
    }

    #[test]
    fn signature_counts() {
        let w = Weights::Exact(alloc::vec![14, 10]);
        assert!((signature_count(&[0, 0], &w).unwrap().value() - 1.0).abs() < 1e-12);
        assert!((signature_count(&[1, 1], &w).unwrap().value() - 140.0).abs() < 1e-6);
        let w1 = Weights::Exact(alloc::vec![3]);
        assert!((signature_count(&[2], &w1).unwrap().value() - 6.0).abs() < 1e-9);
        assert!(signature_count(&[1], &Weights::Exact(alloc::vec![])).is_err());
    }

    #[test]
    fn enumerate_small_simplices() {
        // 2z < 7 → z in {0,1,2,3}
        let n = enumerate_raw(&[2.0], 7.0, 1 << 20, &mut |_| {}).unwrap();
        assert_eq!(n, 4);
        // budget below every coefficient → only the origin
        let n = enumerate_raw(&[2.0, 3.0], 1.5, 1 << 20, &mut |_| {}).unwrap();
        assert_eq!(n, 1);
        // strictness: 2*2 = 4 is excluded
        let n = enumerate_raw(&[2.0], 4.0, 1 << 20, &mut |_| {}).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn enumerate_matches_nested_loops_r3() {
        let coeffs = [2.5, 1.5, 0.75];
        let budget = 9.0;
        let fast = enumerate_raw(&coeffs, budget, 1 << 20, &mut |_| {}).unwrap();
        let mut slow = 0u64;
        for a in 0..20u64 {
            for b in 0..20u64 {
                for c in 0..20u64 {
                    if 2.5 * (a as f64) + 1.5 * (b as f64) + 0.75 * (c as f64) < budget {
                        slow += 1;
                    }
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn visit_cap_reports_partial() {
        match enumerate_raw(&[0.5, 0.5], 50.0, 10, &mut |_| {}) {
            Err(Error::Resource { partial: Some(p), .. }) => assert_eq!(p, 10),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_simplex_is_domain_error() {
        assert!(enumerate_raw(&[1.0, -0.2], 5.0, 100, &mut |_| {}).is_err());
        // the TwoCase rule in the r2 regime produces exactly this
        let t = table();
        let s =
            build_reduced_with_rule(&t, 10_000, 120.0, WeightMode::ExactWeights, RRule::TwoCase)
                .unwrap();
        assert!(s.coeff_upper[s.r - 1] < 0.0);
        assert!(psi_upper(&s, UpperForm::ExactK, 1 << 20).is_err());
    }

    #[test]
    fn lower_counts_monotone_in_budget() {
        let coeffs = [2.0, 1.3];
        let mut prev = 0;
        for b in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let n = enumerate_raw(&coeffs, b, 1 << 20, &mut |_| {}).unwrap();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn lower_is_contained_in_upper() {
        let t = table();
        let s = build_reduced(&t, 10_000, 40.0, WeightMode::ExactWeights).unwrap();
        let lo = enumerate_lattice(&s, Side::Lower, DEFAULT_VISIT_CAP, |_| {}).unwrap();
        let hi = enumerate_lattice(&s, Side::Upper, DEFAULT_VISIT_CAP, |_| {}).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn forms_order_pointwise() {
        let t = table();
        for y in [30.0, 40.0, 60.0] {
            let s = build_reduced(&t, 10_000, y, WeightMode::ExactWeights).unwrap();
            let lp = psi_lower(&s, LowerForm::Poisson, DEFAULT_VISIT_CAP).unwrap();
            let lk = psi_lower(&s, LowerForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
            let uk = psi_upper(&s, UpperForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
            let up = psi_upper(&s, UpperForm::PBound, DEFAULT_VISIT_CAP).unwrap();
            assert!(lp <= lk, "y={y}");
            assert!(lk <= uk, "y={y}");
            assert!(uk <= up, "y={y}");
        }
    }

    #[test]
    fn sandwich_on_small_instance() {
        let t = table();
        let s = build_reduced(&t, 10_000, 40.0, WeightMode::ExactWeights).unwrap();
        let (lo, hi) = s.restricted_interval();
        let restricted = psi_restricted_naive(&t, 10_000, lo, hi).unwrap();
        let lower = psi_lower(&s, LowerForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
        let upper = psi_upper(&s, UpperForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
        let lr = math::ln(restricted as f64);
        assert!(lower.ln() <= lr, "lower {} vs {}", lower.ln(), lr);
        assert!(lr <= upper.ln(), "upper {} vs {}", upper.ln(), lr);
        // lower bound also bounds the full psi from below
        let psi = psi_naive(&t, &SmoothQuery::new(10_000, 40.0)).unwrap();
        assert!(lower.ln() <= math::ln(psi as f64));
    }

    #[test]
    fn restricted_equals_full_psi_when_interval_reaches_two() {
        let t = table();
        // y = 40: y/e^r ≈ 1.99 < 2, so the decomposition covers every prime
        let s = build_reduced(&t, 5000, 40.0, WeightMode::ExactWeights).unwrap();
        let (lo, hi) = s.restricted_interval();
        assert!(lo < 2.0);
        let restricted = psi_restricted_naive(&t, 5000, lo, hi).unwrap();
        let full = psi_naive(&t, &SmoothQuery::new(5000, 40.0)).unwrap();
        assert_eq!(restricted, full);
        // y = 120 under the floor rule excludes p = 2
        let s = build_reduced(&t, 5000, 120.0, WeightMode::ExactWeights).unwrap();
        let (lo, hi) = s.restricted_interval();
        assert!(lo > 2.0);
        let restricted = psi_restricted_naive(&t, 5000, lo, hi).unwrap();
        let full = psi_naive(&t, &SmoothQuery::new(5000, 120.0)).unwrap();
        assert!(restricted < full);
    }
}
