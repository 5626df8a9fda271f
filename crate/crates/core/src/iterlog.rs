//! Iterated logarithms and the main bound formulas in (x, y) coordinates:
//! the lower/upper evaluators, their domain predicates, the conjectured
//! higher-order family, the empirical-a inversion, and the iterated-log
//! residual estimates.

use alloc::format;

use crate::error::{domain, Result};
use crate::math;

/// The k-fold iterated natural logarithm. Errors name the first level at
/// which the argument leaves (0, ∞); the final value may be negative.
pub fn iter_ln(k: u32, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(domain("iter_ln requires k >= 1"));
    }
    let mut v = x;
    for level in 1..=k {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(format!("ln^({level}) undefined: argument {v} not positive")));
        }
        v = math::ln(v);
    }
    Ok(v)
}

/// An (x, y) query with u = ln x / ln y. Carries the logs so queries far
/// beyond f64 range (x up to e^(1e300)) can be posed through `from_logs`;
/// x > e^e and y > e guarantee ln⁽⁴⁾x and ln⁽³⁾y exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYQuery {
    ln_x: f64,
    ln_y: f64,
    u: f64,
}

impl XYQuery {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > math::exp(math::E)) {
            return Err(domain("query requires x > e^e"));
        }
        if !(y > math::E) {
            return Err(domain("query requires y > e"));
        }
        Ok(Self::from_logs_unchecked(math::ln(x), math::ln(y)))
    }

    /// Builds the query from (ln x, ln y) directly.
    pub fn from_logs(ln_x: f64, ln_y: f64) -> Result<Self> {
        if !(ln_x > math::E) {
            return Err(domain("query requires ln x > e"));
        }
        if !(ln_y > 1.0) {
            return Err(domain("query requires ln y > 1"));
        }
        Ok(Self::from_logs_unchecked(ln_x, ln_y))
    }

    fn from_logs_unchecked(ln_x: f64, ln_y: f64) -> Self {
        XYQuery { ln_x, ln_y, u: ln_x / ln_y }
    }

    pub fn x(&self) -> f64 {
        math::exp(self.ln_x)
    }

    pub fn y(&self) -> f64 {
        math::exp(self.ln_y)
    }

    pub fn ln_x(&self) -> f64 {
        self.ln_x
    }

    pub fn ln_y(&self) -> f64 {
        self.ln_y
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// ln⁽ᵏ⁾x for k >= 1.
    pub fn iter_ln_x(&self, k: u32) -> Result<f64> {
        if k == 1 {
            return Ok(self.ln_x);
        }
        iter_ln(k - 1, self.ln_x)
    }

    /// ln⁽ᵏ⁾y for k >= 1.
    pub fn iter_ln_y(&self, k: u32) -> Result<f64> {
        if k == 1 {
            return Ok(self.ln_y);
        }
        iter_ln(k - 1, self.ln_y)
    }

    fn logs(&self) -> Logs {
        Logs {
            l2x: math::ln(self.ln_x),
            l3x: math::ln(math::ln(self.ln_x)),
            l4x: math::ln(math::ln(math::ln(self.ln_x))),
            l2y: math::ln(self.ln_y),
            l3y: math::ln(math::ln(self.ln_y)),
        }
    }
}

struct Logs {
    l2x: f64,
    l3x: f64,
    l4x: f64,
    l2y: f64,
    l3y: f64,
}

/// Lower bound on ln(ψ/x): −u[ln⁽²⁾x − ln⁽²⁾y + ln⁽³⁾x − ln⁽³⁾y + ln⁽⁴⁾x − a̲].
pub fn ln_psi_lower_bound(q: &XYQuery, a_lower: f64) -> f64 {
    let l = q.logs();
    -q.u * (l.l2x - l.l2y + l.l3x - l.l3y + l.l4x - a_lower)
}

/// The same bound through both published algebraic routes:
/// (direct bracket, and ln u + ln⁽³⁾x − ln⁽³⁾y + ln⁽⁴⁾x rewritten via
/// ln⁽²⁾x − ln⁽²⁾y = ln u). Equal up to fp roundoff.
pub fn lower_bound_forms(q: &XYQuery, a_lower: f64) -> (f64, f64) {
    let l = q.logs();
    let form1 = -q.u * (l.l2x - l.l2y + l.l3x - l.l3y + l.l4x - a_lower);
    let form2 = -q.u * (math::ln(q.u) + l.l3x - l.l3y + l.l4x - a_lower);
    (form1, form2)
}

/// Upper bound on ln(ψ/x); the slack variant adds ln y · ln u
/// (= (ln u / u)·ln x).
pub fn ln_psi_upper_bound(q: &XYQuery, a_upper: f64, with_slack: bool) -> f64 {
    let l = q.logs();
    let mut v = -q.u * (l.l2x - l.l2y + l.l3x - l.l3y + l.l4x - a_upper);
    if with_slack {
        v += q.ln_y * math::ln(q.u);
    }
    v
}

/// Lower-bound domain: exp((ln y)^{1−θ}) < ln x < √y.
pub fn lower_domain(q: &XYQuery, theta: f64) -> Result<()> {
    lower_domain_logs(q.ln_x, q.ln_y, theta)
}

pub fn lower_domain_logs(ln_x: f64, ln_y: f64, theta: f64) -> Result<()> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(domain("lower domain requires 0 < theta < 1"));
    }
    let l2x = math::ln(ln_x);
    if !(math::powf(ln_y, 1.0 - theta) < l2x) {
        return Err(domain("lower domain: exp((ln y)^{1-theta}) < ln x fails"));
    }
    if !(l2x < 0.5 * ln_y) {
        return Err(domain("lower domain: ln x < sqrt(y) fails"));
    }
    Ok(())
}

/// Upper-bound domain: (ln y)^ν < ln x < y^β.
pub fn upper_domain(q: &XYQuery, nu: f64, beta: f64) -> Result<()> {
    upper_domain_logs(q.ln_x, q.ln_y, nu, beta)
}

pub fn upper_domain_logs(ln_x: f64, ln_y: f64, nu: f64, beta: f64) -> Result<()> {
    let l2x = math::ln(ln_x);
    let l2y = math::ln(ln_y);
    if !(nu * l2y < l2x) {
        return Err(domain("upper domain: (ln y)^nu < ln x fails"));
    }
    if !(l2x < beta * ln_y) {
        return Err(domain("upper domain: ln x < y^beta fails"));
    }
    Ok(())
}

/// Domain-checked variant of `ln_psi_lower_bound`.
pub fn ln_psi_lower_bound_checked(q: &XYQuery, a_lower: f64, theta: f64) -> Result<f64> {
    lower_domain(q, theta)?;
    Ok(ln_psi_lower_bound(q, a_lower))
}

/// Domain-checked variant of `ln_psi_upper_bound`.
pub fn ln_psi_upper_bound_checked(
    q: &XYQuery,
    a_upper: f64,
    with_slack: bool,
    nu: f64,
    beta: f64,
) -> Result<f64> {
    upper_domain(q, nu, beta)?;
    Ok(ln_psi_upper_bound(q, a_upper, with_slack))
}

/// The conjectured order-k bound on ln ψ / ln x:
/// 1 − (1/ln y)[Σ_{j=2}^{k+1} ln⁽ʲ⁾x − a − Σ_{j=2}^{k} ln⁽ʲ⁾y].
pub fn generalized_bound(q: &XYQuery, a: f64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(domain("generalized bound requires k >= 2"));
    }
    let mut bracket = -a;
    for j in 2..=(k + 1) {
        bracket += q.iter_ln_x(j)?;
    }
    for j in 2..=k {
        bracket -= q.iter_ln_y(j)?;
    }
    Ok(1.0 - bracket / q.ln_y)
}

/// The a making the model ln ψ = u[ln y + ln⁽²⁾y + ln⁽³⁾y − ln⁽²⁾x −
/// ln⁽³⁾x − ln⁽⁴⁾x + a] reproduce the given exact count.
pub fn empirical_a(q: &XYQuery, psi_exact: u64) -> Result<f64> {
    if psi_exact < 1 {
        return Err(domain("empirical_a requires psi >= 1"));
    }
    let l = q.logs();
    let ln_psi = math::ln(psi_exact as f64);
    Ok(ln_psi / q.u - (q.ln_y + l.l2y + l.l3y - l.l2x - l.l3x - l.l4x))
}

/// Residuals of the iterated-log estimates and the ln⁽³⁾y bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterLogReport {
    /// ln⁽³⁾x − ln⁽²⁾u
    pub residual_x3: f64,
    /// ln⁽⁴⁾x − ln⁽³⁾u
    pub residual_x4: f64,
    /// ln⁽⁴⁾y − ln⁽⁴⁾u
    pub residual_y4: f64,
    /// ln⁽³⁾y − ln⁽³⁾u (bracket lower slack; positive when inside)
    pub y3_lower_slack: f64,
    /// ln⁽³⁾u + ln(1/ν) − ln⁽³⁾y (bracket upper slack; positive when inside)
    pub y3_upper_slack: f64,
}

/// Prop.-style residual report on the domain exp((ln y)^ν) < ln x, 0<ν<1.
pub fn iterlog_estimates(q: &XYQuery, nu: f64) -> Result<IterLogReport> {
    if !(0.0 < nu && nu < 1.0) {
        return Err(domain("iterlog estimates require 0 < nu < 1"));
    }
    let l2x = math::ln(q.ln_x);
    let l2y = math::ln(q.ln_y);
    // exp((ln y)^nu) < ln x, compared in log form
    if !(math::powf(q.ln_y, nu) < l2x) {
        return Err(domain("iterlog estimates domain: exp((ln y)^nu) < ln x fails"));
    }
    let ln_u = math::ln(q.u);
    let l2u = math::ln(ln_u);
    let l3u = math::ln(l2u);
    let l3x = math::ln(l2x);
    let l4x = math::ln(l3x);
    let l3y = math::ln(l2y);
    let l4y = math::ln(l3y);
    let l4u = math::ln(l3u);
    Ok(IterLogReport {
        residual_x3: l3x - l2u,
        residual_x4: l4x - l3u,
        residual_y4: l4y - l4u,
        y3_lower_slack: l3y - l3u,
        y3_upper_slack: l3u + math::ln(1.0 / nu) - l3y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_ln_values() {
        assert!((iter_ln(1, math::E).unwrap() - 1.0).abs() < 1e-15);
        let ee = math::exp(math::E);
        assert!((iter_ln(2, ee).unwrap() - 1.0).abs() < 1e-15);
        // frozen from the repeated-log oracle (mpmath, 30 digits)
        let v = iter_ln(4, 1e6).unwrap();
        assert!((v - (-0.035_230_849_712_728_4)).abs() < 1e-12, "got {v}");
        // failing level is named
        let err = iter_ln(3, 2.0).unwrap_err();
        let msg = alloc::format!("{err}");
        assert!(msg.contains("ln^(3)"), "{msg}");
    }

    #[test]
    fn query_identity() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        assert!((q.u() * q.ln_y() - q.ln_x()).abs() < 1e-12);
        // ln2x − ln2y = ln u
        let resid = math::ln(q.ln_x()) - math::ln(q.ln_y()) - math::ln(q.u());
        assert!(resid.abs() < 1e-12);
        assert!(XYQuery::new(10.0, 100.0).is_err());
        assert!(XYQuery::new(1e6, 2.0).is_err());
    }

    #[test]
    fn from_logs_reaches_past_f64() {
        let q = XYQuery::from_logs(2000.0, 20.0).unwrap();
        assert_eq!(q.u(), 100.0);
        assert!(q.x().is_infinite()); // the value itself overflows, the logs work
        assert!((q.iter_ln_x(2).unwrap() - math::ln(2000.0)).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_forms_agree() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        let (f1, f2) = lower_bound_forms(&q, 1.0);
        assert!((f1 - f2).abs() < 1e-10);
        // finite and negative at this point
        assert!(f1 < 0.0 && f1.is_finite());
    }

    #[test]
    fn lower_bound_monotone_in_a() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        assert!(ln_psi_lower_bound(&q, 1.5) > ln_psi_lower_bound(&q, 0.5));
    }

    #[test]
    fn upper_bound_slack_and_order() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        let no_slack = ln_psi_upper_bound(&q, 2.1, false);
        let slack = ln_psi_upper_bound(&q, 2.1, true);
        assert!(slack >= no_slack); // u > 1
        assert!(ln_psi_upper_bound(&q, 3.0, false) > no_slack);
        // consistency: upper(ā=2.1) above lower(a̲=1.0)
        assert!(ln_psi_upper_bound(&q, 2.1, true) >= ln_psi_lower_bound(&q, 1.0));
    }

    #[test]
    fn domains_are_satisfiable_and_jointly_satisfiable() {
        // (1e6, 200) satisfies the lower domain at theta = 0.5
        let q = XYQuery::new(1e6, 200.0).unwrap();
        assert!(lower_domain(&q, 0.5).is_ok());
        // upper domain with nu=2.5, beta=0.4 needs enormous x: ln y = 20,
        // ln x = 2000 works, far beyond f64 for x itself
        assert!(upper_domain_logs(2000.0, 20.0, 2.5, 0.4).is_ok());
        // jointly satisfiable at the same point
        assert!(lower_domain_logs(2000.0, 20.0, 0.5).is_ok());
        // and the checked evaluators work there
        let q = XYQuery::from_logs(2000.0, 20.0).unwrap();
        assert!(ln_psi_lower_bound_checked(&q, 0.0, 0.5).is_ok());
        assert!(ln_psi_upper_bound_checked(&q, 5.0, true, 2.5, 0.4).is_ok());
        // criterion-style grid points violate the formal lower domain
        let q = XYQuery::new(1e6, 100.0).unwrap();
        assert!(ln_psi_lower_bound_checked(&q, 0.0, 0.5).is_err());
    }

    #[test]
    fn generalized_bound_family_indexing() {
        // the full bracket (x-logs to level 4, y-logs to level 3) is the
        // k = 3 member of the family
        let q = XYQuery::new(1e6, 100.0).unwrap();
        let a = 1.3;
        let g3 = generalized_bound(&q, a, 3).unwrap();
        let via_form = ln_psi_lower_bound(&q, a);
        assert!(((g3 - 1.0) * q.ln_x() - via_form).abs() < 1e-10);
        // stepping k = 2 → 3 adds ln⁽⁴⁾x − ln⁽³⁾y to the bracket
        let g2 = generalized_bound(&q, a, 2).unwrap();
        let l4x = q.iter_ln_x(4).unwrap();
        let l3y = q.iter_ln_y(3).unwrap();
        assert!(((g3 - g2) - (-(l4x - l3y) / q.ln_y())).abs() < 1e-12);
    }

    #[test]
    fn generalized_bound_gap_shrinks_along_power_law() {
        // y = x^{0.1}: the k=3 vs k=2 difference tends to zero
        let mut prev = f64::INFINITY;
        for ln_x in [100.0, 709.0, 1e5] {
            let q = XYQuery::from_logs(ln_x, 0.1 * ln_x).unwrap();
            let d = (generalized_bound(&q, 1.0, 3).unwrap()
                - generalized_bound(&q, 1.0, 2).unwrap())
            .abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn empirical_a_round_trip() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        let psi = 72_271u64; // exact inclusive count at (1e6, 100)
        let a = empirical_a(&q, psi).unwrap();
        assert!(a > 0.0 && a < 4.0, "a = {a}");
        // plugging back reproduces ln psi
        let l2x = q.iter_ln_x(2).unwrap();
        let l3x = q.iter_ln_x(3).unwrap();
        let l4x = q.iter_ln_x(4).unwrap();
        let l2y = q.iter_ln_y(2).unwrap();
        let l3y = q.iter_ln_y(3).unwrap();
        let model = q.u() * (q.ln_y() + l2y + l3y - l2x - l3x - l4x + a);
        assert!((model - math::ln(psi as f64)).abs() < 1e-10);
    }

    #[test]
    fn iterlog_residuals_shrink() {
        // ln y = (ln ln x)^{1.9} keeps the domain satisfied as x grows
        let mut prev = f64::INFINITY;
        for ln_x in [1000.0, 1e15, 1e30] {
            let l2x = math::ln(ln_x);
            let ln_y = math::powf(l2x, 1.9);
            let q = XYQuery::from_logs(ln_x, ln_y).unwrap();
            let rep = iterlog_estimates(&q, 0.5).unwrap();
            assert!(rep.residual_x3.abs() < prev);
            prev = rep.residual_x3.abs();
            // bracket holds with slack 0.5 on this sequence
            assert!(rep.y3_lower_slack > -0.5, "at ln x = {ln_x}");
            assert!(rep.y3_upper_slack > -0.5, "at ln x = {ln_x}");
            // sign: ln u < ln²x since ln²y > 0
            assert!(rep.residual_x3 > 0.0);
        }
    }

    #[test]
    fn lower_domain_complements_the_classical_one() {
        // with theta > 2/5 + eps, any point outside the classical regime
        // u < exp((ln y)^{3/5 - eps}) already satisfies the left edge
        // ln x > exp((ln y)^{1 - theta}): set containment on a sample
        let (eps, theta) = (0.05, 0.5);
        for ln_y in [3.0f64, 8.0, 20.0, 50.0] {
            for ln_u in [0.5f64, 2.0, 5.0, 20.0, 200.0] {
                let u_outside = ln_u >= math::powf(ln_y, 0.6 - eps);
                let ln_x = math::exp(ln_u) * ln_y; // ln x = u ln y
                let left_edge_holds = math::ln(ln_x) > math::powf(ln_y, 1.0 - theta);
                if u_outside {
                    assert!(left_edge_holds, "ln_y={ln_y} ln_u={ln_u}");
                }
            }
        }
    }

    #[test]
    fn iterlog_estimates_reject_bad_domain() {
        let q = XYQuery::new(1e6, 100.0).unwrap();
        // exp((ln 100)^0.5) ≈ e^{2.15} ≈ 8.6 needs ln²x > 2.15; ln²x ≈ 2.63
        // passes, but nu = 0.9 needs (ln 100)^0.9 ≈ 3.95 < 2.63: fails
        assert!(iterlog_estimates(&q, 0.5).is_ok());
        assert!(iterlog_estimates(&q, 0.9).is_err());
        assert!(iterlog_estimates(&q, 1.5).is_err());
    }
}
