//! Numerical Dickman ρ(u): the unique continuous solution of
//! uρ′(u) = −ρ(u−1) with ρ = 1 on [0,1], tabulated on a uniform mesh,
//! together with its log-scale values and the asymptotic comparison forms.
//!
//! The table is advanced with the averaged identity
//! uρ(u) = ∫_{u−1}^{u} ρ(t) dt (the delay ODE integrated once). Unlike the
//! subtractive form ρ(u) = ρ(k) − ∫ρ(t−1)/t dt, whose trapezoid truncation
//! error decays only like 1/u and therefore swamps ρ(u) beyond u ≈ 8, the
//! averaging recursion is a positive operator: errors stay relative to the
//! local solution scale. The rolling window is renormalized once per unit
//! interval, so ln ρ is produced directly and the build never underflows.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoteVariant {
    /// −u ln u
    Ul,
    /// −u (ln u + ln ln u)
    Ul2,
}

pub struct RhoSolver {
    steps_per_unit: usize,
    max_u: f64,
    /// ln ρ at mesh points j/steps_per_unit, j = 0..=units·steps_per_unit.
    ln_table: Vec<f64>,
}

impl RhoSolver {
    /// Builds the table on [0, max_u]. `step` is rounded to 1/n so the unit
    /// delay lands exactly on mesh points.
    pub fn new(step: f64, max_u: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.5) {
            return Err(domain("rho solver step must lie in (0, 0.5]"));
        }
        if !(max_u >= 2.0) {
            return Err(domain("rho solver max_u must be >= 2"));
        }
        let n = ((1.0 / step) + 0.5) as usize;
        let n = n.max(2);
        let units = math::ceil(max_u) as usize;
        if n.saturating_mul(units) > 200_000_000 {
            return Err(domain("rho solver mesh too large"));
        }
        let total = n * units;
        let h = 1.0 / n as f64;
        let mut ln_table = vec![0.0f64; total + 1];

        // [1, 2]: closed form rho = 1 - ln u
        #[allow(clippy::needless_range_loop)]
        for j in n..=(2 * n).min(total) {
            let u = j as f64 * h;
            ln_table[j] = math::ln(1.0 - math::ln(u));
        }

        if units > 2 {
            // Rolling window w holds rho/e^off on the last n+1 mesh points,
            // slot = global index mod n+1; integral holds the trapezoid of w
            // over the trailing unit.
            let mut w = vec![0.0f64; n + 1];
            for i in 0..=n {
                let u = 1.0 + i as f64 * h;
                w[(n + i) % (n + 1)] = 1.0 - math::ln(u);
            }
            let mut off = 0.0f64;
            // ∫_1^2 (1 - ln t) dt = 2 - 2 ln 2, exact seed
            let mut integral = 2.0 - 2.0 * math::LN_2;

            let mut j = 2 * n; // mesh index of the newest point
            while j < total {
                let u_next = (j + 1) as f64 * h;
                let oldest = w[(j - n) % (n + 1)];
                let old_next = w[(j - n + 1) % (n + 1)];
                let newest = w[j % (n + 1)];
                let rhs = integral + 0.5 * h * newest - 0.5 * h * (oldest + old_next);
                let w_next = rhs / (u_next - 0.5 * h);
                integral = rhs + 0.5 * h * w_next;
                w[(j + 1) % (n + 1)] = w_next;
                ln_table[j + 1] = off + math::ln(w_next);
                j += 1;

                if j.is_multiple_of(n) {
                    // renormalize so the newest value becomes 1
                    let scale = w[j % (n + 1)];
                    for wi in w.iter_mut() {
                        *wi /= scale;
                    }
                    off += math::ln(scale);
                    // re-sum the window trapezoid to cancel rolling drift
                    let mut s = 0.5 * (w[(j - n) % (n + 1)] + w[j % (n + 1)]);
                    for i in (j - n + 1)..j {
                        s += w[i % (n + 1)];
                    }
                    integral = s * h;
                }
            }
        }

        Ok(RhoSolver { steps_per_unit: n, max_u, ln_table })
    }

    /// Default mesh: step 1e-3, table up to u = 100.
    pub fn with_defaults() -> Result<Self> {
        Self::new(1e-3, 100.0)
    }

    pub fn step(&self) -> f64 {
        1.0 / self.steps_per_unit as f64
    }

    pub fn max_u(&self) -> f64 {
        self.max_u
    }

    fn check_range(&self, u: f64) -> Result<()> {
        if !(0.0..=self.max_u).contains(&u) || !u.is_finite() {
            return Err(domain("u outside the solver table range"));
        }
        Ok(())
    }

    /// ρ(u). Exact on [0,1] (=1) and [1,2] (=1−ln u); table lookup with
    /// log-linear interpolation beyond.
    pub fn rho(&self, u: f64) -> Result<f64> {
        Ok(math::exp(self.ln_rho(u)?))
    }

    /// ln ρ(u), finite for any tabulated u regardless of how small ρ gets.
    pub fn ln_rho(&self, u: f64) -> Result<f64> {
        self.check_range(u)?;
        if u <= 1.0 {
            return Ok(0.0);
        }
        if u <= 2.0 {
            return Ok(math::ln(1.0 - math::ln(u)));
        }
        let n = self.steps_per_unit as f64;
        let pos = u * n;
        let j = math::floor(pos) as usize;
        let hi = (self.ln_table.len() - 1).min(j + 1);
        let frac = pos - j as f64;
        let lo_v = self.ln_table[j.min(self.ln_table.len() - 1)];
        let hi_v = self.ln_table[hi];
        Ok(lo_v + frac * (hi_v - lo_v))
    }
}

/// The comparison asymptotes for ln ρ.
pub fn rho_asymptote(u: f64, variant: AsymptoteVariant) -> Result<f64> {
    match variant {
        AsymptoteVariant::Ul => {
            if !(u > 0.0) {
                return Err(domain("UL asymptote requires u > 0"));
            }
            Ok(-u * math::ln(u))
        }
        AsymptoteVariant::Ul2 => {
            if !(u > math::E) {
                return Err(domain("UL2 asymptote requires u > e"));
            }
            Ok(-u * (math::ln(u) + math::ln(math::ln(u))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent high-precision integration (30-digit
    // mpmath, averaging form, mesh-refined).
    const RHO3: f64 = 0.048_608_388_291_131_6;
    const LN_RHO_20: f64 = -65.874_08;
    const LN_RHO_50: f64 = -221.446_33;
    const LN_RHO_100: f64 = -527.291_32;

    #[test]
    fn flat_on_unit_interval() {
        let s = RhoSolver::new(1e-2, 5.0).unwrap();
        assert_eq!(s.rho(0.0).unwrap(), 1.0);
        assert_eq!(s.rho(0.5).unwrap(), 1.0);
        assert_eq!(s.rho(1.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_on_one_two() {
        let s = RhoSolver::new(1e-2, 5.0).unwrap();
        let v = s.rho(2.0).unwrap();
        assert!((v - (1.0 - math::LN_2)).abs() < 1e-15);
        assert!((s.rho(1.5).unwrap() - (1.0 - math::ln(1.5))).abs() < 1e-15);
    }

    #[test]
    fn rho3_close_at_default_step() {
        let s = RhoSolver::new(1e-3, 10.0).unwrap();
        assert!((s.rho(3.0).unwrap() - RHO3).abs() < 1e-7);
    }

    #[test]
    fn deep_log_values() {
        let s = RhoSolver::with_defaults().unwrap();
        for (u, expect) in [(20.0, LN_RHO_20), (50.0, LN_RHO_50), (100.0, LN_RHO_100)] {
            let got = s.ln_rho(u).unwrap();
            let rel = ((got - expect) / expect).abs();
            assert!(rel < 1e-4, "u={u}: got {got}, expected {expect}");
        }
        // linear value still positive and strictly decreasing on a coarse scan
        let mut prev = f64::INFINITY;
        let mut u = 1.0;
        while u <= 100.0 {
            let lr = s.ln_rho(u).unwrap();
            assert!(lr < prev);
            prev = lr;
            u += 0.5;
        }
    }

    #[test]
    fn mesh_halving_converges_at_order_two() {
        let fine = RhoSolver::new(1.0 / 8000.0, 8.0).unwrap();
        let truth = fine.rho(5.0).unwrap();
        let e250 = (RhoSolver::new(1.0 / 250.0, 8.0).unwrap().rho(5.0).unwrap() - truth).abs();
        let e500 = (RhoSolver::new(1.0 / 500.0, 8.0).unwrap().rho(5.0).unwrap() - truth).abs();
        let order = math::ln(e250 / e500) / math::LN_2;
        assert!(order >= 1.8, "observed order {order} (errors {e250} vs {e500})");
    }

    #[test]
    fn ln_rho_cross_mesh_consistency() {
        // 4x refinement pair, u = 10
        let a = RhoSolver::new(2.5e-4, 12.0).unwrap();
        let b = RhoSolver::new(6.25e-5, 12.0).unwrap();
        let d = (a.ln_rho(10.0).unwrap() - b.ln_rho(10.0).unwrap()).abs();
        assert!(d < 1e-6, "mesh disagreement {d}");
        // ln_rho consistent with rho where both representable
        let lr = a.ln_rho(10.0).unwrap();
        assert!((math::ln(a.rho(10.0).unwrap()) - lr).abs() < 1e-12);
    }

    #[test]
    fn ln_rho_finite_at_fifty() {
        let s = RhoSolver::new(1e-2, 60.0).unwrap(); // coarse mesh
        let v = s.ln_rho(50.0).unwrap();
        assert!(v.is_finite() && v < 0.0);
        assert!((v - LN_RHO_50).abs() / LN_RHO_50.abs() < 1e-2);
    }

    #[test]
    fn asymptote_values() {
        let u = math::E * math::E;
        assert!((rho_asymptote(u, AsymptoteVariant::Ul).unwrap() + 2.0 * u).abs() < 1e-12);
        let v = rho_asymptote(20.0, AsymptoteVariant::Ul2).unwrap();
        assert!((v + 20.0 * (math::ln(20.0) + math::ln(math::ln(20.0)))).abs() < 1e-12);
        assert!(rho_asymptote(2.0, AsymptoteVariant::Ul2).is_err());
    }

    #[test]
    fn ul2_crossover_measured() {
        // The UL2 form only starts beating UL around u ≈ 90: it loses at
        // u = 20 and 50, wins at 90 and 100. Pinned here as measured.
        let s = RhoSolver::with_defaults().unwrap();
        let err = |u: f64, variant| {
            let lr = s.ln_rho(u).unwrap();
            (lr / rho_asymptote(u, variant).unwrap() - 1.0).abs()
        };
        for u in [20.0, 50.0] {
            assert!(err(u, AsymptoteVariant::Ul2) > err(u, AsymptoteVariant::Ul), "u={u}");
        }
        for u in [90.0, 100.0] {
            assert!(err(u, AsymptoteVariant::Ul2) < err(u, AsymptoteVariant::Ul), "u={u}");
        }
    }

    #[test]
    fn out_of_range_is_domain_error() {
        let s = RhoSolver::new(1e-2, 5.0).unwrap();
        assert!(s.rho(5.1).is_err());
        assert!(s.rho(-0.1).is_err());
    }
}
