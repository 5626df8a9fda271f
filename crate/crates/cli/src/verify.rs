//! The acceptance criteria, runnable from the CLI (`smoothbound verify`)
//! and from the integration test suite. Each criterion pins its grid,
//! tolerances and thresholds in code; three of them encode constants that
//! the exact computations refute — those report their measured values and
//! fail, by design (see the inline comments and the repository README).

use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use smoothbound_core::bertrand::scan;
use smoothbound_core::dickman::{rho_asymptote, AsymptoteVariant, RhoSolver};
use smoothbound_core::iterlog::{
    empirical_a, ln_psi_lower_bound, ln_psi_upper_bound, lower_bound_forms, XYQuery,
};
use smoothbound_core::primes::PrimeTable;
use smoothbound_core::recursion::{
    alpha_for_beta, descent_step, f_cm, f_direct, g_cm, g_direct, h_function, h_max_closed,
    in_domain, AuxProblem, BoundParams, DescentForm, FgCache, A_STAR,
};
use smoothbound_core::simplex::{
    build_reduced, psi_lower, psi_restricted_naive, psi_upper, LowerForm, UpperForm, WeightMode,
    DEFAULT_VISIT_CAP,
};
use smoothbound_core::smooth::{psi_naive, psi_recursive, Convention, PsiCache, SmoothQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced grids, finishes in well under a minute.
    Smoke,
    /// The full grids and runtime budgets.
    Desk,
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

pub const CRITERIA: [(usize, &str); 12] = [
    (1, "oracle-equivalence"),
    (2, "psi-equals-x-for-large-y"),
    (3, "half-smooth-fraction"),
    (4, "dickman-values-and-density"),
    (5, "ln-rho-asymptote-ratio"),
    (6, "simplex-sandwich"),
    (7, "h-kernel-closed-form"),
    (8, "f-g-recursions"),
    (9, "descent-closure"),
    (10, "iterlog-bound-sandwich"),
    (11, "bertrand-scan"),
    (12, "algebraic-identities"),
];

fn shared_table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| PrimeTable::build(2_000_000).expect("sieve build"))
}

/// Collects failed checks; keeps the first few messages.
struct Check {
    checks: usize,
    failures: usize,
    messages: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { checks: 0, failures: 0, messages: Vec::new() }
    }

    fn claim(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < 6 {
                self.messages.push(msg());
            }
        }
    }

    fn finish(self, mut extra: String) -> (bool, String) {
        let ok = self.failures == 0;
        if !extra.is_empty() {
            extra.push_str("; ");
        }
        let mut detail = format!("{extra}{} checks, {} failed", self.checks, self.failures);
        for m in &self.messages {
            let _ = write!(detail, "; {m}");
        }
        (ok, detail)
    }
}

pub fn run_all(scale: Scale) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, scale)).collect()
}

pub fn run_criterion(id: usize, scale: Scale) -> CriterionResult {
    let name = CRITERIA[id - 1].1;
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => c1_oracle_equivalence(scale),
        2 => c2_psi_equals_x(scale),
        3 => c3_half_smooth(scale),
        4 => c4_dickman(scale),
        5 => c5_ln_rho_ratio(),
        6 => c6_sandwich(scale),
        7 => c7_h_kernel(),
        8 => c8_fg_recursions(),
        9 => c9_descent_closure(),
        10 => c10_main_sandwich(scale),
        11 => c11_bertrand(scale),
        12 => c12_identities(),
        _ => (false, format!("unknown criterion {id}")),
    };
    let millis = start.elapsed().as_millis();
    let budget_ms: Option<u128> = if scale == Scale::Desk {
        match id {
            1 => Some(120_000),
            4 | 5 | 8 | 11 => Some(60_000),
            6 | 10 => Some(300_000),
            _ => None,
        }
    } else {
        None
    };
    let (passed, detail) = match budget_ms {
        Some(b) if millis >= b => {
            (false, format!("{detail}; runtime {millis} ms over budget {b} ms"))
        }
        _ => (passed, detail),
    };
    CriterionResult { id, name, passed, detail, millis }
}

/// Prefix-count structure over largest-prime-factor values.
struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { tree: vec![0; n + 1] }
    }

    fn add(&mut self, mut i: usize) {
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> u64 {
        i = i.min(self.tree.len() - 1);
        let mut s = 0u64;
        while i > 0 {
            s += self.tree[i] as u64;
            i -= i & i.wrapping_neg();
        }
        s
    }
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Criterion 1: psi_recursive equals the brute-force count for all
/// x <= 20000 and y in {2,3,5,10,⌊√x⌋,x}, every convention, plus the
/// (10^6, 100) spot check.
fn c1_oracle_equivalence(scale: Scale) -> (bool, String) {
    let x_max = match scale {
        Scale::Desk => 20_000u64,
        Scale::Smoke => 2_000,
    };
    let t = shared_table();
    let mut chk = Check::new();

    // largest prime factor of every k, by smallest-factor division (the
    // psi_naive loop body, shared across the x sweep)
    let mut lpf = vec![0u32; x_max as usize + 1];
    if x_max >= 1 {
        lpf[1] = 1;
    }
    for k in 2..=x_max {
        let mut n = k;
        let mut best = 0u64;
        while n > 1 {
            let p = t.smallest_factor(n).unwrap();
            if p > best {
                best = p;
            }
            while n % p == 0 {
                n /= p;
            }
        }
        lpf[k as usize] = best as u32;
    }

    let mut fen = Fenwick::new(x_max as usize);
    let mut cache = PsiCache::with_budget(8_000_000);
    for x in 1..=x_max {
        fen.add(lpf[x as usize] as usize);
        let ys = [2, 3, 5, 10, isqrt(x).max(2), x.max(2)];
        for y in ys {
            let inclusive = fen.prefix(y as usize);
            let strict = fen.prefix(y as usize - 1);
            let yf = y as f64;
            let cases = [
                (Convention::Inclusive, inclusive),
                (Convention::Strict, strict),
                (Convention::FromTwo, inclusive - 1),
            ];
            for (conv, expect) in cases {
                let got = psi_recursive(t, &SmoothQuery::with_convention(x, yf, conv), &mut cache)
                    .unwrap();
                chk.claim(got == expect, || {
                    format!("recursive({x},{y},{conv:?}) = {got}, oracle {expect}")
                });
            }
        }
    }

    // dense subsample: psi_naive against the same oracle chain
    let mut x = 1;
    while x <= x_max {
        let ys = [2, 3, 5, 10, isqrt(x).max(2), x.max(2)];
        for y in ys {
            for conv in [Convention::Inclusive, Convention::Strict, Convention::FromTwo] {
                let q = SmoothQuery::with_convention(x, y as f64, conv);
                let naive = psi_naive(t, &q).unwrap();
                let rec = psi_recursive(t, &q, &mut cache).unwrap();
                chk.claim(naive == rec, || {
                    format!("naive({x},{y},{conv:?}) = {naive} vs recursive {rec}")
                });
            }
        }
        x += 487;
    }

    // single large check
    let (big_x, expect) = match scale {
        Scale::Desk => (1_000_000u64, 72_271u64),
        Scale::Smoke => (100_000, 17_442),
    };
    let q = SmoothQuery::new(big_x, 100.0);
    let naive = psi_naive(t, &q).unwrap();
    let rec = psi_recursive(t, &q, &mut cache).unwrap();
    chk.claim(naive == rec && naive == expect, || {
        format!("psi({big_x},100): naive {naive}, recursive {rec}, expected {expect}")
    });

    chk.finish(format!("x <= {x_max}, memo {} entries", cache.len()))
}

/// Criterion 2: ψ(x, y) = x whenever y >= x, inclusive convention.
fn c2_psi_equals_x(scale: Scale) -> (bool, String) {
    let x_max = match scale {
        Scale::Desk => 10_000u64,
        Scale::Smoke => 1_500,
    };
    let t = shared_table();
    let mut chk = Check::new();
    let mut cache = PsiCache::new();
    for x in 1..=x_max {
        let y = (x as f64).max(2.0);
        let naive = psi_naive(t, &SmoothQuery::new(x, y)).unwrap();
        chk.claim(naive == x, || format!("naive psi({x},{y}) = {naive}"));
        let rec = psi_recursive(t, &SmoothQuery::new(x, y), &mut cache).unwrap();
        chk.claim(rec == x, || format!("recursive psi({x},{y}) = {rec}"));
    }
    // strictly larger y as well
    for x in [1u64, 10, 100, 5000, x_max] {
        let y = x as f64 * 3.5 + 2.0;
        let naive = psi_naive(t, &SmoothQuery::new(x, y)).unwrap();
        chk.claim(naive == x, || format!("naive psi({x},{y}) = {naive}"));
    }
    chk.finish(format!("x <= {x_max}"))
}

/// Criterion 3: ψ(x,√x)/x > ln(e/2) on the powers of ten.
fn c3_half_smooth(scale: Scale) -> (bool, String) {
    let xs: &[u64] = match scale {
        Scale::Desk => &[1_000, 10_000, 100_000, 1_000_000],
        Scale::Smoke => &[1_000, 10_000, 100_000],
    };
    let t = shared_table();
    let threshold = (std::f64::consts::E / 2.0).ln();
    let mut chk = Check::new();
    let mut detail = String::new();
    for &x in xs {
        let v = smoothbound_core::smooth::half_smooth_fraction(t, x).unwrap();
        let _ = write!(detail, "x={x}: {v:.6} ");
        chk.claim(v > threshold, || format!("fraction at {x} is {v} <= {threshold}"));
    }
    chk.finish(detail)
}

/// Criterion 4: ρ(2) and ρ(3) accuracy at step 1e-3, and the smooth-density
/// match at x = 10^6. The u = 3 density clause asserts a 25% tolerance the
/// exact counts refute (measured deviation 48.7%); it reports and fails.
fn c4_dickman(scale: Scale) -> (bool, String) {
    let solver = RhoSolver::with_defaults().expect("solver");
    let mut chk = Check::new();
    let mut detail = String::new();

    let rho2 = solver.rho(2.0).unwrap();
    let exact2 = 1.0 - std::f64::consts::LN_2;
    chk.claim((rho2 - exact2).abs() < 1e-6, || format!("rho(2) = {rho2} vs {exact2}"));

    let rho3 = solver.rho(3.0).unwrap();
    let oracle3 = 0.048_608_388_291_131_6; // fine-mesh oracle value
    chk.claim((rho3 - oracle3).abs() < 1e-5, || format!("rho(3) = {rho3} vs {oracle3}"));

    let _ = scale; // the density clause is only meaningful at x = 10^6
    let t = shared_table();
    let x = 1_000_000u64;
    for u in [2u32, 3] {
        let y = (x as f64).powf(1.0 / u as f64);
        let psi = psi_naive(t, &SmoothQuery::new(x, y)).unwrap();
        let density = psi as f64 / x as f64;
        let rho_u = solver.rho(u as f64).unwrap();
        let dev = (density - rho_u).abs() / rho_u;
        let _ = write!(detail, "u={u}: density {density:.6}, rho {rho_u:.6}, rel dev {dev:.4}; ");
        chk.claim(dev <= 0.25, || format!("u={u}: |psi/x - rho| = {dev:.4} of rho exceeds 0.25"));
    }
    chk.finish(detail)
}

/// Criterion 5: |ln ρ(u)/(−u(ln u + ln⁽²⁾u)) − 1| <= 2 ln⁽³⁾u/ln⁽²⁾u and
/// the UL2 form beating UL at u in {20, 50, 100}. The true ln ρ(20)
/// violates the pinned constant (0.195 > 0.169) and UL2 only overtakes UL
/// near u ≈ 90; the failing clauses report their measured values.
fn c5_ln_rho_ratio() -> (bool, String) {
    let solver = RhoSolver::with_defaults().expect("solver");
    let mut chk = Check::new();
    let mut detail = String::new();
    for u in [20.0f64, 50.0, 100.0] {
        let lr = solver.ln_rho(u).unwrap();
        let ul = rho_asymptote(u, AsymptoteVariant::Ul).unwrap();
        let ul2 = rho_asymptote(u, AsymptoteVariant::Ul2).unwrap();
        let e_ul = (lr / ul - 1.0).abs();
        let e_ul2 = (lr / ul2 - 1.0).abs();
        let l2u = u.ln().ln();
        let bound = 2.0 * l2u.ln() / l2u;
        let _ = write!(detail, "u={u}: |UL2-1|={e_ul2:.4} bound={bound:.4} |UL-1|={e_ul:.4}; ");
        chk.claim(e_ul2 <= bound, || format!("u={u}: ratio error {e_ul2:.4} > bound {bound:.4}"));
        chk.claim(e_ul2 < e_ul, || format!("u={u}: UL2 ({e_ul2:.4}) does not beat UL ({e_ul:.4})"));
    }
    chk.finish(detail)
}

/// Criterion 6: exact-weight sandwich psi_lower <= ψ_restricted <= psi_upper
/// over the grid.
fn c6_sandwich(scale: Scale) -> (bool, String) {
    let (xs, ys): (&[u64], &[f64]) = match scale {
        Scale::Desk => (&[10_000, 100_000], &[30.0, 60.0, 120.0]),
        Scale::Smoke => (&[10_000], &[30.0, 60.0]),
    };
    let t = shared_table();
    let mut chk = Check::new();
    let mut detail = String::new();
    for &x in xs {
        for &y in ys {
            let s = build_reduced(t, x, y, WeightMode::ExactWeights).unwrap();
            let (lo, hi) = s.restricted_interval();
            let restricted = psi_restricted_naive(t, x, lo, hi).unwrap();
            let lower = psi_lower(&s, LowerForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
            let upper = psi_upper(&s, UpperForm::ExactK, DEFAULT_VISIT_CAP).unwrap();
            let ln_r = (restricted as f64).ln();
            let _ =
                write!(detail, "({x},{y}): {:.3} <= {ln_r:.3} <= {:.3}; ", lower.ln(), upper.ln());
            chk.claim(lower.ln() <= ln_r, || {
                format!("({x},{y}): lower {} above ln restricted {ln_r}", lower.ln())
            });
            chk.claim(ln_r <= upper.ln(), || {
                format!("({x},{y}): upper {} below ln restricted {ln_r}", upper.ln())
            });
            // form ordering comes along for free
            let poisson = psi_lower(&s, LowerForm::Poisson, DEFAULT_VISIT_CAP).unwrap();
            let pbound = psi_upper(&s, UpperForm::PBound, DEFAULT_VISIT_CAP).unwrap();
            chk.claim(poisson <= lower, || format!("({x},{y}): poisson above exact-k"));
            chk.claim(upper <= pbound, || format!("({x},{y}): p-bound below exact-k"));
        }
    }
    chk.finish(detail)
}

/// Criterion 7: closed-form H maximum against a grid+refine search, plus
/// the exact t0 and f values at γ = a.
fn c7_h_kernel() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut chk = Check::new();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let c = rng.gen_range(3.0..50.0);
        let m = rng.gen_range(c..10.0 * c);
        let gamma = rng.gen_range(0.0..5.0);
        let a = rng.gen_range(1.0..A_STAR);
        let hm = h_max_closed(c, m, gamma, a).unwrap();

        // oracle: coarse grid to bracket, then ternary refinement
        let u = m / c;
        let n = 2048;
        let mut best_i = 0usize;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=n {
            let z = u * i as f64 / n as f64;
            let v = h_function(z, c, m, gamma, a).unwrap();
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let mut lo = u * best_i.saturating_sub(1) as f64 / n as f64;
        let mut hi = u * ((best_i + 1).min(n)) as f64 / n as f64;
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if h_function(m1, c, m, gamma, a).unwrap() < h_function(m2, c, m, gamma, a).unwrap() {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let oracle = h_function(0.5 * (lo + hi), c, m, gamma, a).unwrap().max(best);
        let diff = (hm.maximum - oracle).abs();
        worst = worst.max(diff);
        chk.claim(diff <= 1e-8, || {
            format!(
                "closed {} vs grid {} at c={c:.3} M={m:.3} γ={gamma:.3} a={a:.3}",
                hm.maximum, oracle
            )
        });
    }
    let a = 1.25;
    let hm = h_max_closed(6.0, 20.0, a, a).unwrap();
    chk.claim(hm.t0 == 0.5, || format!("t0(γ=a) = {}", hm.t0));
    chk.claim(hm.f_gamma == std::f64::consts::LN_2, || format!("f(a) = {}", hm.f_gamma));
    chk.finish(format!("worst |closed - grid| = {worst:.2e}"))
}

/// Criterion 8: F/G recursion vs direct enumeration to 1e-9 relative,
/// G >= F, and the G < 2F claim at (5, 10) — which the computed ratio
/// G/F ≈ 2220 refutes; that clause reports and fails.
fn c8_fg_recursions() -> (bool, String) {
    let mut chk = Check::new();
    let mut cache = FgCache::new();
    for &c in &[2.5f64, 3.5, 4.5] {
        for &m in &[3.0f64, 6.0, 9.0] {
            let p = AuxProblem::new(c, m).unwrap();
            let f_rec = f_cm(&p, &mut cache).unwrap().ln();
            let f_dir = f_direct(&p).ln();
            let rel_f = (f_rec - f_dir).abs() / f_dir.abs().max(1.0);
            chk.claim(rel_f <= 1e-9, || format!("F({c},{m}): rel gap {rel_f:.2e}"));
            let g_rec = g_cm(&p, &mut cache).unwrap().ln();
            let g_dir = g_direct(&p).ln();
            let rel_g = (g_rec - g_dir).abs() / g_dir.abs().max(1.0);
            chk.claim(rel_g <= 1e-9, || format!("G({c},{m}): rel gap {rel_g:.2e}"));
            chk.claim(g_rec >= f_rec, || format!("G({c},{m}) below F"));
        }
    }
    let p = AuxProblem::new(5.0, 10.0).unwrap();
    let f = f_cm(&p, &mut cache).unwrap();
    let g = g_cm(&p, &mut cache).unwrap();
    let ratio = (g.ln() - f.ln()).exp();
    chk.claim(g >= f, || "G(5,10) below F(5,10)".to_string());
    chk.claim(ratio < 2.0, || format!("G(5,10)/F(5,10) = {ratio:.1}, not < 2"));
    chk.finish(format!("G/F at (5,10) = {ratio:.1}"))
}

/// Criterion 9: descent closure of D_{1/2} (α = 5) and of D_{0.05}
/// (α = α(β)), 50 random starts each.
fn c9_descent_closure() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut chk = Check::new();
    let params_half = BoundParams { alpha: 5.0, ..Default::default() };
    for _ in 0..50 {
        let c = rng.gen_range(100.0..200.0);
        let ln_m: f64 = rng.gen_range(1.01..0.5 * c);
        let m = ln_m.exp();
        assert!(in_domain(c, m, 0.5));
        let d = descent_step(c, m, &params_half, DescentForm::Log1).unwrap();
        chk.claim(in_domain(d.c_next, d.m_next, 0.5), || {
            format!("D_1/2 closure fails at c={c:.2} lnM={ln_m:.2} -> lnM'={:.4}", d.m_next.ln())
        });
    }
    let beta = 0.05;
    let params_beta = BoundParams { alpha: alpha_for_beta(beta), ..Default::default() };
    for _ in 0..50 {
        let c = rng.gen_range(100.0..200.0);
        let ln_m: f64 = rng.gen_range(1.01..beta * c);
        let m = ln_m.exp();
        assert!(in_domain(c, m, beta));
        let d = descent_step(c, m, &params_beta, DescentForm::Log1).unwrap();
        chk.claim(in_domain(d.c_next, d.m_next, beta), || {
            format!("D_beta closure fails at c={c:.2} lnM={ln_m:.4} -> lnM'={:.4}", d.m_next.ln())
        });
    }
    // the boundary case is the tight one: include it explicitly
    for c in [100.0f64, 150.0, 200.0] {
        let m = (beta * c).exp();
        let d = descent_step(c, m, &params_beta, DescentForm::Log1).unwrap();
        chk.claim(in_domain(d.c_next, d.m_next, beta), || {
            format!("D_beta closure fails on the boundary at c={c}")
        });
    }
    chk.finish(format!("alpha(beta) = {:.6}", alpha_for_beta(beta)))
}

/// Criterion 10: empirical sandwich with wide constants over the
/// {1e5,1e6,1e7} × {60,100,200} grid, exact ψ from the recursion (itself
/// pinned against an independent sieve), and the empirical-a spread.
fn c10_main_sandwich(scale: Scale) -> (bool, String) {
    // exact counts, frozen from an independent least-prime-factor sieve
    let frozen: &[(u64, f64, u64)] = &[
        (100_000, 60.0, 11_331),
        (100_000, 100.0, 17_442),
        (100_000, 200.0, 28_863),
        (1_000_000, 60.0, 40_636),
        (1_000_000, 100.0, 72_271),
        (1_000_000, 200.0, 143_430),
        (10_000_000, 60.0, 131_034),
        (10_000_000, 100.0, 269_882),
        (10_000_000, 200.0, 648_167),
    ];
    let keep = match scale {
        Scale::Desk => frozen,
        Scale::Smoke => &frozen[..6],
    };
    let t = shared_table();
    let mut cache = PsiCache::with_budget(8_000_000);
    let mut chk = Check::new();
    let mut a_min = f64::INFINITY;
    let mut a_max = f64::NEG_INFINITY;
    for &(x, y, expect) in keep {
        let psi = psi_recursive(t, &SmoothQuery::new(x, y), &mut cache).unwrap();
        chk.claim(psi == expect, || format!("psi({x},{y}) = {psi}, sieve oracle {expect}"));
        let q = XYQuery::new(x as f64, y).unwrap();
        let exact = (psi as f64 / x as f64).ln();
        let lower = ln_psi_lower_bound(&q, 0.0);
        let upper = ln_psi_upper_bound(&q, 5.0, true);
        chk.claim(lower <= exact, || format!("({x},{y}): lower {lower:.4} > exact {exact:.4}"));
        chk.claim(exact <= upper, || format!("({x},{y}): upper {upper:.4} < exact {exact:.4}"));
        let a = empirical_a(&q, psi).unwrap();
        a_min = a_min.min(a);
        a_max = a_max.max(a);
    }
    let spread = a_max - a_min;
    chk.claim(spread < 1.5, || format!("empirical a spread {spread:.4} >= 1.5"));
    chk.finish(format!("empirical a in [{a_min:.4}, {a_max:.4}], spread {spread:.4}"))
}

/// Criterion 11: no prime-free (y, γy) window for γ = 1.5 on [10, 10^6]
/// and γ = 2 on [2, 10^6].
fn c11_bertrand(scale: Scale) -> (bool, String) {
    let hi = match scale {
        Scale::Desk => 1_000_000u64,
        Scale::Smoke => 100_000,
    };
    let t = shared_table();
    let mut chk = Check::new();
    let r1 = scan(t, 10, hi, 1.5).unwrap();
    chk.claim(r1.failures.is_empty(), || {
        format!("gamma=1.5: {} failures, first {:?}", r1.failures.len(), r1.failures.first())
    });
    let r2 = scan(t, 2, hi, 2.0).unwrap();
    chk.claim(r2.failures.is_empty(), || {
        format!("gamma=2: {} failures, first {:?}", r2.failures.len(), r2.failures.first())
    });
    chk.finish(format!("scanned y <= {hi}"))
}

/// Criterion 12: the ln⁽²⁾x − ln⁽²⁾y = ln u identity, the two lower-bound
/// forms, and the empirical-a round trip, over 1000 seeded random queries.
fn c12_identities() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut chk = Check::new();
    let mut worst_id = 0.0f64;
    let mut worst_forms = 0.0f64;
    let mut worst_rt = 0.0f64;
    for _ in 0..1000 {
        let ln_x: f64 = rng.gen_range(8.0..700.0);
        let ratio: f64 = rng.gen_range(1.2..100.0);
        let ln_y = (ln_x / ratio).max(1.05);
        let q = XYQuery::new(ln_x.exp(), ln_y.exp()).unwrap();
        let resid = (q.iter_ln_x(2).unwrap() - q.iter_ln_y(2).unwrap() - q.u().ln()).abs();
        worst_id = worst_id.max(resid);
        chk.claim(resid < 1e-12, || format!("identity residual {resid:.2e}"));
        let a = rng.gen_range(0.0..3.0);
        let (f1, f2) = lower_bound_forms(&q, a);
        let fd = (f1 - f2).abs();
        worst_forms = worst_forms.max(fd);
        chk.claim(fd < 1e-10, || format!("form gap {fd:.2e}"));
        let psi = rng.gen_range(1u64..1_000_000_000_000);
        let a_emp = empirical_a(&q, psi).unwrap();
        let model = smoothbound_core::bertrand::psi_model(&q, a_emp);
        let rt = (model - (psi as f64).ln()).abs();
        worst_rt = worst_rt.max(rt);
        chk.claim(rt < 1e-10, || format!("round trip residual {rt:.2e}"));
    }
    chk.finish(format!(
        "worst: identity {worst_id:.1e}, forms {worst_forms:.1e}, round-trip {worst_rt:.1e}"
    ))
}
