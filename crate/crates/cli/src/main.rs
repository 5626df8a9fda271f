use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use smoothbound_cli::verify::{run_all, Scale};
use smoothbound_cli::{build_table, env_table_limit, DEFAULT_TABLE_LIMIT};
use smoothbound_core::bertrand;
use smoothbound_core::dickman::RhoSolver;
use smoothbound_core::iterlog::{empirical_a, ln_psi_lower_bound, ln_psi_upper_bound, XYQuery};
use smoothbound_core::recursion::{f_cm, g_cm, AuxProblem, FgCache};
use smoothbound_core::smooth::{psi_naive, psi_recursive, Convention, PsiCache, SmoothQuery};
use smoothbound_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "smoothbound",
    version,
    about = "smooth-number counts, Dickman rho, and sandwich bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Naive,
    Recursive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Inclusive,
    Strict,
    FromTwo,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Inclusive => Convention::Inclusive,
            ConventionArg::Strict => Convention::Strict,
            ConventionArg::FromTwo => Convention::FromTwo,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Smoke,
    Desk,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    F,
    G,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactArg {
    /// compute the exact column when x fits the table
    Auto,
    /// leave the exact column empty
    Never,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count y-smooth integers up to x
    Psi {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Recursive)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Inclusive)]
        convention: ConventionArg,
        #[arg(long)]
        table_limit: Option<u64>,
        /// cap on recursion memo entries
        #[arg(long)]
        memo_budget: Option<usize>,
    },
    /// Evaluate the iterated-log bounds over an (x, y) grid; CSV on stdout
    Bounds {
        /// comma-separated x values
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        /// comma-separated y values
        #[arg(long, value_delimiter = ',', required = true)]
        ys: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        a_lower: f64,
        #[arg(long, default_value_t = 5.0)]
        a_upper: f64,
        /// include the ln u · ln y slack in the upper bound
        #[arg(long, default_value_t = true)]
        slack: bool,
        #[arg(long, value_enum, default_value_t = ExactArg::Auto)]
        exact: ExactArg,
        #[arg(long)]
        table_limit: Option<u64>,
    },
    /// Dickman rho at a point
    Rho {
        #[arg(long)]
        u: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 100.0)]
        max_u: f64,
    },
    /// Scan [lo, hi] for y with no prime in (y, gamma*y)
    Bertrand {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long)]
        table_limit: Option<u64>,
    },
    /// Evaluate the F/G weighted lattice sums
    Recursion {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, value_enum, default_value_t = WhichArg::Both)]
        which: WhichArg,
    },
    /// Run the acceptance criteria; exit 0 iff all pass
    Verify {
        #[arg(long, value_enum, default_value_t = ScaleArg::Desk)]
        scale: ScaleArg,
    },
}

fn table_limit_for(flag: Option<u64>, needed: u64) -> u64 {
    flag.or_else(env_table_limit).unwrap_or(DEFAULT_TABLE_LIMIT).max(needed)
}

/// 17 significant digits: round-trip safe for f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct PsiOut {
    x: u64,
    y: f64,
    method: &'static str,
    convention: &'static str,
    psi: u64,
}

fn cmd_psi(
    x: u64,
    y: f64,
    method: MethodArg,
    convention: ConventionArg,
    table_limit: Option<u64>,
    memo_budget: Option<usize>,
) -> anyhow::Result<()> {
    let needed = match method {
        MethodArg::Naive => x.max(y.ceil() as u64).max(2),
        MethodArg::Recursive => (y.ceil() as u64 + 1).max(2),
    };
    let limit = table_limit_for(table_limit, needed);
    let start = Instant::now();
    let t = build_table(limit)?;
    let q = SmoothQuery::with_convention(x, y, convention.into());
    let mut cache = match memo_budget {
        Some(b) => PsiCache::with_budget(b),
        None => PsiCache::new(),
    };
    let (psi, method_name) = match method {
        MethodArg::Naive => (psi_naive(&t, &q), "naive"),
        MethodArg::Recursive => (psi_recursive(&t, &q, &mut cache), "recursive"),
    };
    let psi = psi.map_err(anyhow::Error::new)?;
    let out = PsiOut {
        x,
        y,
        method: method_name,
        convention: match convention {
            ConventionArg::Inclusive => "inclusive",
            ConventionArg::Strict => "strict",
            ConventionArg::FromTwo => "from-two",
        },
        psi,
    };
    println!("{}", serde_json::to_string(&out)?);
    eprintln!("{{\"elapsed_ms\": {}}}", start.elapsed().as_millis());
    Ok(())
}

fn cmd_bounds(
    xs: &[u64],
    ys: &[f64],
    a_lower: f64,
    a_upper: f64,
    slack: bool,
    exact: ExactArg,
    table_limit: Option<u64>,
) -> anyhow::Result<()> {
    let max_y = ys.iter().cloned().fold(2.0f64, f64::max);
    let limit = table_limit_for(table_limit, max_y.ceil() as u64 + 1);
    let t = build_table(limit)?;
    let mut cache = PsiCache::new();

    let mut grid: Vec<(u64, f64)> = Vec::new();
    for &x in xs {
        for &y in ys {
            grid.push((x, y));
        }
    }
    grid.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));

    println!("schema_version,x,y,u,ln_psi_over_x,lower,upper,empirical_a");
    for (x, y) in grid {
        let q = match XYQuery::new(x as f64, y) {
            Ok(q) => q,
            Err(e) => {
                eprintln!("row x={x} y={y}: {e}");
                continue;
            }
        };
        let lower = ln_psi_lower_bound(&q, a_lower);
        let upper = ln_psi_upper_bound(&q, a_upper, slack);
        let psi = match exact {
            ExactArg::Auto => psi_recursive(&t, &SmoothQuery::new(x, y), &mut cache).ok(),
            ExactArg::Never => None,
        };
        let (exact_col, a_col) = match psi {
            Some(p) => {
                let exact = ((p as f64) / (x as f64)).ln();
                let a = empirical_a(&q, p).map(fmt_f64).unwrap_or_default();
                (fmt_f64(exact), a)
            }
            None => (String::new(), String::new()),
        };
        println!(
            "v1,{x},{},{},{exact_col},{},{},{a_col}",
            fmt_f64(y),
            fmt_f64(q.u()),
            fmt_f64(lower),
            fmt_f64(upper)
        );
    }
    Ok(())
}

fn cmd_rho(u: f64, step: f64, max_u: f64) -> anyhow::Result<()> {
    let solver = RhoSolver::new(step, max_u).map_err(anyhow::Error::new)?;
    let rho = solver.rho(u).map_err(anyhow::Error::new)?;
    let ln_rho = solver.ln_rho(u).map_err(anyhow::Error::new)?;
    println!(
        "{}",
        serde_json::json!({ "u": u, "step": solver.step(), "rho": rho, "ln_rho": ln_rho })
    );
    Ok(())
}

fn cmd_bertrand(gamma: f64, lo: u64, hi: u64, table_limit: Option<u64>) -> anyhow::Result<()> {
    let needed = (gamma * hi as f64).ceil() as u64 + 1;
    let limit = table_limit_for(table_limit, needed);
    let t = build_table(limit)?;
    let rep = bertrand::scan(&t, lo, hi, gamma).map_err(anyhow::Error::new)?;
    println!(
        "{}",
        serde_json::json!({
            "gamma": rep.gamma,
            "lo": rep.y_lo,
            "hi": rep.y_hi,
            "failures": rep.failures,
            "count": rep.failures.len(),
        })
    );
    Ok(())
}

fn cmd_recursion(c: f64, m: f64, which: WhichArg) -> anyhow::Result<()> {
    let p = AuxProblem::new(c, m).map_err(anyhow::Error::new)?;
    let mut cache = FgCache::new();
    let mut out = serde_json::json!({ "c": c, "m": m });
    if matches!(which, WhichArg::F | WhichArg::Both) {
        let f = f_cm(&p, &mut cache).map_err(anyhow::Error::new)?;
        out["ln_f"] = serde_json::json!(f.ln());
    }
    if matches!(which, WhichArg::G | WhichArg::Both) {
        let g = g_cm(&p, &mut cache).map_err(anyhow::Error::new)?;
        out["ln_g"] = serde_json::json!(g.ln());
    }
    println!("{out}");
    Ok(())
}

fn cmd_verify(scale: ScaleArg) -> anyhow::Result<bool> {
    let scale = match scale {
        ScaleArg::Smoke => Scale::Smoke,
        ScaleArg::Desk => Scale::Desk,
    };
    let results = run_all(scale);
    let all_passed = results.iter().all(|r| r.passed);
    for r in &results {
        eprintln!(
            "criterion {:>2} {:<28} {}  ({} ms)",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.millis
        );
    }
    let summary = serde_json::json!({
        "scale": match scale { Scale::Smoke => "smoke", Scale::Desk => "desk" },
        "all_passed": all_passed,
        "failed": results.iter().filter(|r| !r.passed).map(|r| r.name).collect::<Vec<_>>(),
        "criteria": results.iter().map(|r| serde_json::json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
            "elapsed_ms": r.millis,
        })).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(all_passed)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Resource { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Psi { x, y, method, convention, table_limit, memo_budget } => {
            cmd_psi(x, y, method, convention, table_limit, memo_budget).map(|_| true)
        }
        Cmd::Bounds { xs, ys, a_lower, a_upper, slack, exact, table_limit } => {
            cmd_bounds(&xs, &ys, a_lower, a_upper, slack, exact, table_limit).map(|_| true)
        }
        Cmd::Rho { u, step, max_u } => cmd_rho(u, step, max_u).map(|_| true),
        Cmd::Bertrand { gamma, lo, hi, table_limit } => {
            cmd_bertrand(gamma, lo, hi, table_limit).map(|_| true)
        }
        Cmd::Recursion { c, m, which } => cmd_recursion(c, m, which).map(|_| true),
        Cmd::Verify { scale } => cmd_verify(scale),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
