//! The auxiliary weighted lattice-sum problems F(c,M) and G(c,M), the
//! iteration kernel (H, its closed-form maximum, integer-neighbor
//! correction, seed coefficient), descent steps over the D_β domains, and
//! the asymptotic bound evaluators in (c, M) coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::logvalue::LogValue;
use crate::math;

/// 1 + ln(e − 1), the constant separating the lower- and upper-bound
/// families.
pub const A_STAR: f64 = 1.541_324_854_612_918_1;

/// Memo keys quantize (c, M) to this grid; M − cz takes continuum values.
pub const QUANT_STEP: f64 = 1.0 / (1u64 << 20) as f64;

/// A (c, M) instance. `m` is the right-hand side of the simplex constraint
/// c z_0 + (c−1) z_1 + ... < m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxProblem {
    pub c: f64,
    pub m: f64,
}

impl AuxProblem {
    pub fn new(c: f64, m: f64) -> Result<Self> {
        if !(c > 1.0) {
            return Err(domain("aux problem requires c > 1"));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(domain("aux problem requires finite m > 0"));
        }
        Ok(AuxProblem { c, m })
    }

    /// r = ⌊c⌋, the number of P-problem variables.
    pub fn r(&self) -> usize {
        math::floor(self.c) as usize
    }

    /// Bases m_i = (e−1)e^{c−i}/(c−i) for the P problem (i = 0..r−1).
    pub fn bases(&self) -> Vec<f64> {
        (0..self.r()).map(|i| base(self.c, i)).collect()
    }

    /// Bases for the Q problem: i = 0..⌈c⌉−1. For non-integer c that is
    /// 0..⌊c⌋; integer c drops the degenerate zero-coefficient variable,
    /// whose base would be infinite.
    pub fn bases_q(&self) -> Vec<f64> {
        let n = math::ceil(self.c) as usize;
        (0..n).map(|i| base(self.c, i)).collect()
    }
}

#[inline]
fn base(c: f64, i: usize) -> f64 {
    (math::E - 1.0) * math::exp(c - i as f64) / (c - i as f64)
}

/// Shared memo for the F and G recursions, keyed on the quantized (c, M).
/// Values are exact for the quantized key; M arguments closer than
/// `QUANT_STEP` share a cell.
pub struct FgCache {
    f_memo: BTreeMap<(i64, i64), f64>,
    g_memo: BTreeMap<(i64, i64), f64>,
    pub max_entries: usize,
}

impl Default for FgCache {
    fn default() -> Self {
        Self::new()
    }
}

impl FgCache {
    pub fn new() -> Self {
        FgCache { f_memo: BTreeMap::new(), g_memo: BTreeMap::new(), max_entries: 4_000_000 }
    }

    pub fn len(&self) -> usize {
        self.f_memo.len() + self.g_memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(c: f64, m: f64) -> (i64, i64) {
        ((c / QUANT_STEP + 0.5) as i64, (m / QUANT_STEP + 0.5) as i64)
    }

    fn check_budget(&self) -> Result<()> {
        if self.len() >= self.max_entries {
            return Err(Error::Resource {
                what: format!("F/G memo exceeded {} entries", self.max_entries),
                partial: None,
            });
        }
        Ok(())
    }
}

/// F(c, M) = Σ_z F(c−1, M−cz) m_0^z/z!, base case at ⌊c⌋ = 1 (direct
/// single-variable sum), memoized. Equals the weighted count over the
/// strict simplex Σ(c−i)z_i < M.
pub fn f_cm(p: &AuxProblem, cache: &mut FgCache) -> Result<LogValue> {
    Ok(LogValue::from_ln(f_log(p.c, p.m, cache)?))
}

fn f_log(c: f64, m: f64, cache: &mut FgCache) -> Result<f64> {
    if m <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let key = FgCache::key(c, m);
    if let Some(&v) = cache.f_memo.get(&key) {
        return Ok(v);
    }
    let m0 = base(c, 0);
    let ln_m0 = math::ln(m0);
    let mut acc = LogValue::ZERO;
    if math::floor(c) <= 1.0 {
        let mut z = 0u64;
        while c * (z as f64) < m {
            acc += LogValue::from_ln(z as f64 * ln_m0 - math::ln_factorial(z));
            z += 1;
        }
    } else {
        let mut z = 0u64;
        while c * (z as f64) < m {
            let child = f_log(c - 1.0, m - c * z as f64, cache)?;
            acc += LogValue::from_ln(child + z as f64 * ln_m0 - math::ln_factorial(z));
            z += 1;
        }
    }
    cache.check_budget()?;
    cache.f_memo.insert(key, acc.ln());
    Ok(acc.ln())
}

/// G(c, M) = Σ_z G(c−1, M−cz) (m_0^z/z!) e^{z²/m_0}, base case at c <= 1.
/// Uses one more variable than F (coefficients down to c − ⌈c⌉ + 1).
pub fn g_cm(p: &AuxProblem, cache: &mut FgCache) -> Result<LogValue> {
    Ok(LogValue::from_ln(g_log(p.c, p.m, cache)?))
}

fn g_log(c: f64, m: f64, cache: &mut FgCache) -> Result<f64> {
    if m <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let key = FgCache::key(c, m);
    if let Some(&v) = cache.g_memo.get(&key) {
        return Ok(v);
    }
    let m0 = base(c, 0);
    let ln_m0 = math::ln(m0);
    let mut acc = LogValue::ZERO;
    if math::ceil(c) <= 1.0 {
        let mut z = 0u64;
        while c * (z as f64) < m {
            let zf = z as f64;
            acc += LogValue::from_ln(zf * ln_m0 - math::ln_factorial(z) + zf * zf / m0);
            z += 1;
        }
    } else {
        let mut z = 0u64;
        while c * (z as f64) < m {
            let zf = z as f64;
            let child = g_log(c - 1.0, m - c * zf, cache)?;
            acc += LogValue::from_ln(child + zf * ln_m0 - math::ln_factorial(z) + zf * zf / m0);
            z += 1;
        }
    }
    cache.check_budget()?;
    cache.g_memo.insert(key, acc.ln());
    Ok(acc.ln())
}

/// Direct enumeration of the defining lattice sum for F; exponential in r,
/// reference oracle for the recursion.
pub fn f_direct(p: &AuxProblem) -> LogValue {
    let bases = p.bases();
    let coeffs: Vec<f64> = (0..p.r()).map(|i| p.c - i as f64).collect();
    weighted_simplex_sum(&coeffs, &bases, p.m, false)
}

/// Direct enumeration of the defining lattice sum for G.
pub fn g_direct(p: &AuxProblem) -> LogValue {
    let bases = p.bases_q();
    let n = bases.len();
    let coeffs: Vec<f64> = (0..n).map(|i| p.c - i as f64).collect();
    weighted_simplex_sum(&coeffs, &bases, p.m, true)
}

fn weighted_simplex_sum(coeffs: &[f64], bases: &[f64], budget: f64, quad: bool) -> LogValue {
    fn walk(
        coeffs: &[f64],
        bases: &[f64],
        quad: bool,
        i: usize,
        rem: f64,
        w: f64,
        acc: &mut LogValue,
    ) {
        if i == coeffs.len() {
            *acc += LogValue::from_ln(w);
            return;
        }
        let mut z = 0u64;
        while coeffs[i] * (z as f64) < rem {
            let zf = z as f64;
            let mut term = w + zf * math::ln(bases[i]) - math::ln_factorial(z);
            if quad {
                term += zf * zf / bases[i];
            }
            walk(coeffs, bases, quad, i + 1, rem - coeffs[i] * zf, term, acc);
            z += 1;
        }
    }
    let mut acc = LogValue::ZERO;
    walk(coeffs, bases, quad, 0, budget, 0.0, &mut acc);
    acc
}

/// The iteration kernel H(z) on 0 <= z <= M/c, with the z ln z terms
/// continuous at the endpoints.
pub fn h_function(z: f64, c: f64, m: f64, gamma: f64, a: f64) -> Result<f64> {
    if !(c > 0.0 && m > 0.0) {
        return Err(domain("h_function requires c, M > 0"));
    }
    let u = m / c;
    if !(0.0..=u).contains(&z) {
        return Err(domain("h_function requires 0 <= z <= M/c"));
    }
    let xlx = |t: f64| if t == 0.0 { 0.0 } else { t * math::ln(t) };
    Ok(m * (1.0 + gamma / c) + (a - gamma) * z - u * math::ln(c) - xlx(z) - xlx(u - z))
}

/// Closed-form maximum of H over [0, M/c].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HMax {
    pub maximum: f64,
    pub z0: f64,
    pub t0: f64,
    pub f_gamma: f64,
}

/// max H = M(1 − ln M/c + (γ + f(γ))/c) with f(γ) = ln(1 + e^{a−γ}),
/// attained at z0 = (M/c)·t0, t0 = 1/(1 + e^{γ−a}).
pub fn h_max_closed(c: f64, m: f64, gamma: f64, a: f64) -> Result<HMax> {
    if !(c > 0.0 && m > 0.0) {
        return Err(domain("h_max_closed requires c, M > 0"));
    }
    let t0 = 1.0 / (1.0 + math::exp(gamma - a));
    let f_gamma = math::ln_1p(math::exp(a - gamma));
    let maximum = m * (1.0 - math::ln(m) / c + (gamma + f_gamma) / c);
    Ok(HMax { maximum, z0: (m / c) * t0, t0, f_gamma })
}

/// Rounding a real maximizer to its integer neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborCorrection {
    pub z1: u64,
    pub z2: u64,
    /// min(θ², (1−θ)²): the H-loss of the better admissible neighbor.
    pub loss_bound: f64,
    /// e^{−θ²} + e^{−(1−θ)²}, always > 1.
    pub exp_sum: f64,
}

pub fn integer_neighbor_correction(z0: f64) -> Result<NeighborCorrection> {
    if !(z0 >= 1.0) {
        return Err(domain("neighbor correction requires z0 >= 1"));
    }
    let z1 = math::ceil(z0);
    let z2 = math::floor(z0);
    let theta = z1 - z0;
    let loss_bound = (theta * theta).min((1.0 - theta) * (1.0 - theta));
    let loss_bound = if z1 == z2 { 0.0 } else { loss_bound };
    let exp_sum = math::exp(-theta * theta) + math::exp(-(1.0 - theta) * (1.0 - theta));
    Ok(NeighborCorrection { z1: z1 as u64, z2: z2 as u64, loss_bound, exp_sum })
}

/// Induction seed B(κ, γ) = e^{−e^{κ+γ}} and the maximizer M₀ = e^{κ+γ} of
/// the exponent map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedCoefficient {
    pub log: f64,
    pub m0: f64,
    pub saturated: bool,
}

pub fn seed_coefficient(kappa: f64, gamma: f64) -> SeedCoefficient {
    let e = kappa + gamma;
    if e > 709.0 {
        return SeedCoefficient { log: f64::NEG_INFINITY, m0: f64::INFINITY, saturated: true };
    }
    let m0 = math::exp(e);
    SeedCoefficient { log: -m0, m0, saturated: false }
}

/// The constant bundle shared by the bound evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub a: f64,
    pub a_star: f64,
    pub a_lower: f64,
    pub a_upper: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub nu: f64,
    pub delta: f64,
    pub gamma: f64,
    pub q: f64,
    pub lambda_rate: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        let beta = 0.4;
        let lambda_rate = 0.5;
        let delta = lambda_rate * beta;
        BoundParams {
            a: 1.0,
            a_star: A_STAR,
            a_lower: 1.0,
            a_upper: A_STAR + delta,
            alpha: 5.0,
            beta,
            theta: 0.5,
            nu: 2.5,
            delta,
            gamma: 1.0,
            q: 1.0 - lambda_rate * beta / 2.0,
            lambda_rate,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.a_star) {
            return Err(domain("params require a < a_star"));
        }
        if !(self.a_lower < self.a_upper) {
            return Err(domain("params require a_lower < a_upper"));
        }
        if !(0.0 < self.beta && self.beta < 0.5) {
            return Err(domain("params require 0 < beta < 1/2"));
        }
        if !(0.0 < self.theta && self.theta < 1.0) {
            return Err(domain("params require 0 < theta < 1"));
        }
        Ok(())
    }
}

/// α(β) = (β/2)(1 + β/2), the descent margin adequate for D_β closure.
pub fn alpha_for_beta(beta: f64) -> f64 {
    0.5 * beta * (1.0 + 0.5 * beta)
}

/// ε = 1 − 2β, the decay-rate margin the upper-bound comparison runs on.
pub fn epsilon_for_beta(beta: f64) -> f64 {
    1.0 - 2.0 * beta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentForm {
    /// γ₀ = a − α + ln(c−1) − ln ln M
    Log1,
    /// γ₀ = a − α + ln(c−1) + ln⁽²⁾(c−1) − ln⁽²⁾M − ln⁽³⁾M
    Log2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descent {
    pub c_next: f64,
    pub m_next: f64,
    pub gamma0: f64,
    pub t0: f64,
}

/// One descent step (c, M) → (c−1, M(1−t₀)).
pub fn descent_step(c: f64, m: f64, params: &BoundParams, form: DescentForm) -> Result<Descent> {
    if !(c > 2.0) {
        return Err(domain("descent requires c > 2"));
    }
    if !(m > math::E) {
        return Err(domain("descent requires M > e"));
    }
    let gamma0 = match form {
        DescentForm::Log1 => params.a - params.alpha + math::ln(c - 1.0) - math::ln(math::ln(m)),
        DescentForm::Log2 => {
            if !(m > math::exp(math::E)) {
                return Err(domain("Log2 descent requires M > e^e"));
            }
            params.a - params.alpha + math::ln(c - 1.0) + math::ln(math::ln(c - 1.0))
                - math::ln(math::ln(m))
                - math::ln(math::ln(math::ln(m)))
        }
    };
    let t0 = 1.0 / (1.0 + math::exp(gamma0 - params.a));
    Ok(Descent { c_next: c - 1.0, m_next: m * (1.0 - t0), gamma0, t0 })
}

/// (c, M) ∈ D_β ⇔ 1 <= M <= e^{βc} (boundary inclusive).
pub fn in_domain(c: f64, m: f64, beta: f64) -> bool {
    m >= 1.0 && math::ln(m) <= beta * c
}

/// Lower-bound exponent for ln F(c,M):
/// M(1 − (ln M + ln⁽²⁾M + ln⁽³⁾M)/(c+1) + (a − α + ln c + ln⁽²⁾c)/(c+1)).
/// Domain-checked: c^{1−θ} < ln M < c/2.
pub fn lower_bound_exponent(c: f64, m: f64, params: &BoundParams) -> Result<f64> {
    let ln_m = math::ln(m);
    if !(math::powf(c, 1.0 - params.theta) < ln_m) {
        return Err(domain("lower bound domain: c^{1-theta} < ln M fails"));
    }
    if !(ln_m < 0.5 * c) {
        return Err(domain("lower bound domain: ln M < c/2 fails"));
    }
    let l2m = math::ln(ln_m);
    if !(l2m > 0.0) {
        return Err(domain("lower bound needs ln ln M > 0"));
    }
    let l3m = math::ln(l2m);
    let ln_c = math::ln(c);
    let l2c = math::ln(ln_c);
    Ok(m * (1.0 - (ln_m + l2m + l3m) / (c + 1.0)
        + (params.a - params.alpha + ln_c + l2c) / (c + 1.0)))
}

/// Upper-bound exponent for ln G(c,M):
/// M(1 − (ln M + ln⁽²⁾M + ln⁽³⁾M)/c + (ā + ln c + ln⁽²⁾c)/c), optionally
/// plus the accumulated slack c·ln(M/c). Domain-checked: c^ν < M < e^{βc}.
pub fn upper_bound_exponent(c: f64, m: f64, params: &BoundParams, with_slack: bool) -> Result<f64> {
    if !(params.a_upper > A_STAR) {
        return Err(domain("upper bound requires a_upper > a_star"));
    }
    if !(math::powf(c, params.nu) < m) {
        return Err(domain("upper bound domain: c^nu < M fails"));
    }
    if !(math::ln(m) < params.beta * c) {
        return Err(domain("upper bound domain: M < e^{beta c} fails"));
    }
    let ln_m = math::ln(m);
    let l2m = math::ln(ln_m);
    let l3m = math::ln(l2m);
    let ln_c = math::ln(c);
    let l2c = math::ln(ln_c);
    let mut v = m * (1.0 - (ln_m + l2m + l3m) / c + (params.a_upper + ln_c + l2c) / c);
    if with_slack {
        v += c * math::ln(m / c);
    }
    Ok(v)
}
