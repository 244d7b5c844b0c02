//! `curvidx`: curvature and Fredholm index of almost-unitary contractions.
//!
//! Exit codes: 0 success, 1 verification failure or method disagreement,
//! 2 invalid input, 3 non-convergence.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use curvidx_core::curvature::{curvature_cesaro, curvature_defect, curvature_integral, CurvatureResult};
use curvidx_core::harness::{self, HarnessConfig};
use curvidx_core::index::{index_commutator, index_symbol, index_via_b, IndexResult};
use curvidx_core::kernel::validate::{validate_almost_unitary, validate_contraction};
use curvidx_core::zoo;
use curvidx_core::{oplang, Op64};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "curvidx", version, about = "Curvature and Fredholm index of almost-unitary contraction operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Formula {
    Defect,
    Cesaro,
    Integral,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Symbol,
    Commutator,
    Bn,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the curvature of an operator spec.
    Curvature {
        /// Operator spec, e.g. "shift(1)" or "adj(shift(1)) (+) shift(1)".
        spec: String,
        #[arg(long, value_enum, default_value_t = Formula::All)]
        formula: Formula,
        /// Override the stabilization limit max_n.
        #[arg(long)]
        max_n: Option<usize>,
        /// Override the stabilization tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Optional key=value config file.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Compute the Fredholm index of an operator spec.
    Index {
        spec: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Probe index for the b-sequence route.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Verify the index/curvature relation and the trace identities.
    Verify {
        /// Operator spec (omit when using --zoo or --random).
        spec: Option<String>,
        /// Verify every fixed zoo member.
        #[arg(long)]
        zoo: bool,
        /// Verify N seeded random operators.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        /// Master seed for --random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a CSV flattening here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Curvature { spec, formula, max_n, tol, json, config } => {
            cmd_curvature(&spec, formula, max_n, tol, json, config.as_deref())
        }
        Command::Index { spec, method, n, config } => cmd_index(&spec, method, n, config.as_deref()),
        Command::Verify { spec, zoo, random, seed, out, csv, config } => {
            cmd_verify(spec.as_deref(), zoo, random, seed, out.as_deref(), csv.as_deref(), config.as_deref())
        }
    };
    ExitCode::from(code)
}

fn load_config(path: Option<&std::path::Path>) -> Result<HarnessConfig<f64>, String> {
    let mut cfg = HarnessConfig::default();
    if let Some(path) = path {
        config::apply_config_file(&mut cfg, path)?;
    }
    Ok(cfg)
}

/// Parse and validate, or explain why not (exit 2 territory).
fn parse_validated(spec: &str, cfg: &HarnessConfig<f64>) -> Result<Op64, String> {
    let op = oplang::parse::<f64>(spec).map_err(|e| e.to_string())?;
    let cert = validate_contraction(&op, &cfg.validation);
    if !cert.pass {
        let worst = cert
            .leaves
            .iter()
            .map(|l| l.sigma_max.max(l.symbol_max))
            .fold(0.0f64, f64::max);
        return Err(format!("not a contraction: largest bound {worst:.6} exceeds 1"));
    }
    if !validate_almost_unitary(&op) {
        return Err("not almost unitary: defect symbols are nonzero".to_string());
    }
    Ok(op)
}

fn cmd_curvature(
    spec: &str,
    formula: Formula,
    max_n: Option<usize>,
    tol: Option<f64>,
    json: bool,
    config: Option<&std::path::Path>,
) -> u8 {
    let mut cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return invalid(&e),
    };
    if let Some(m) = max_n {
        cfg.convergence.max_n = m;
    }
    if let Some(t) = tol {
        cfg.convergence.tol = t;
    }
    let op = match parse_validated(spec, &cfg) {
        Ok(op) => op,
        Err(e) => return invalid(&e),
    };

    let wanted: Vec<Formula> = match formula {
        Formula::All => vec![Formula::Defect, Formula::Cesaro, Formula::Integral],
        f => vec![f],
    };
    let mut results: Vec<CurvatureResult<f64>> = Vec::new();
    for f in &wanted {
        let computed = match f {
            Formula::Defect => curvature_defect(&op, &cfg.convergence),
            Formula::Cesaro => curvature_cesaro(&op, &cfg.convergence),
            Formula::Integral => curvature_integral(&op, &cfg.schedule),
            Formula::All => unreachable!(),
        };
        match computed {
            Ok(r) => results.push(r),
            Err(e) => return invalid(&e.to_string()),
        }
    }

    if json {
        let fields: Vec<String> = results
            .iter()
            .map(|r| {
                format!(
                    "\"{}\":{{\"value\":{:.16e},\"converged\":{},\"steps\":{}}}",
                    r.method.tag(),
                    r.value,
                    r.converged,
                    r.diagnostics.steps
                )
            })
            .collect();
        println!("{{\"spec\":{:?},\"curvature\":{{{}}}}}", spec, fields.join(","));
    } else {
        for r in &results {
            let state = if r.converged { "converged" } else { "NOT converged" };
            println!(
                "{:<9} K = {:.12} ({state}, steps = {}, path: {})",
                format!("{}:", r.method.tag()),
                r.value,
                r.diagnostics.steps,
                r.diagnostics.path
            );
        }
    }
    if results.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NONCONVERGED
    }
}

fn cmd_index(spec: &str, method: Method, probe: usize, config: Option<&std::path::Path>) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return invalid(&e),
    };
    let op = match parse_validated(spec, &cfg) {
        Ok(op) => op,
        Err(e) => return invalid(&e),
    };

    let wanted: Vec<Method> = match method {
        Method::All => vec![Method::Symbol, Method::Commutator, Method::Bn],
        m => vec![m],
    };
    let mut results: Vec<IndexResult<f64>> = Vec::new();
    for m in &wanted {
        let computed = match m {
            Method::Symbol => index_symbol(&op),
            Method::Commutator => index_commutator(&op),
            Method::Bn => index_via_b(&op, probe),
            Method::All => unreachable!(),
        };
        match computed {
            Ok(r) => results.push(r),
            Err(e) => return invalid(&e.to_string()),
        }
    }
    for r in &results {
        let label = match r.method {
            curvidx_core::index::IndexMethod::BProbe => format!("b_n[{probe}]:"),
            m => format!("{}:", m.tag()),
        };
        let flag = if r.reliable { "" } else { "  [unreliable]" };
        println!("{label:<12} index = {} (raw {:.12}, residual {:.3e}){flag}", r.value, r.raw, r.residual);
    }
    let first = results[0].value;
    if results.iter().all(|r| r.value == first && r.reliable) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_verify(
    spec: Option<&str>,
    zoo_flag: bool,
    random: Option<usize>,
    seed: u64,
    out: Option<&std::path::Path>,
    csv: Option<&std::path::Path>,
    config: Option<&std::path::Path>,
) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return invalid(&e),
    };

    let mut specs: Vec<String> = Vec::new();
    if let Some(s) = spec {
        specs.push(s.to_string());
    }
    if zoo_flag {
        specs.extend(zoo::fixed_zoo::<f64>().iter().map(|m| m.spec.to_string()));
    }
    if let Some(n) = random {
        let gen_cfg = zoo::RandomOpConfig::default();
        for i in 0..n {
            let (_, prov) = zoo::random_almost_unitary::<f64>(seed.wrapping_add(i as u64), &gen_cfg);
            specs.push(prov.spec_string);
        }
    }
    if specs.is_empty() {
        return invalid("nothing to verify: give a spec, --zoo, or --random N");
    }

    let sweep = harness::sweep::<f64>(&specs, &cfg);
    for row in &sweep.rows {
        let verdict = if row.pass { "PASS" } else { "FAIL" };
        match (&row.body, &row.error) {
            (Some(b), _) => println!(
                "{verdict} {} (index {}, theorem residual {:.3e}, purity {:.3e})",
                row.spec, b.index.symbol, b.theorem_residual.defect, b.purity
            ),
            (None, Some(e)) => println!("{verdict} {} ({e})", row.spec),
            (None, None) => println!("{verdict} {}", row.spec),
        }
    }
    let passed = sweep.rows.iter().filter(|r| r.pass).count();
    println!(
        "verified {} operator(s): {} pass, {} fail",
        sweep.rows.len(),
        passed,
        sweep.rows.len() - passed
    );

    if let Some(path) = out {
        let json = harness::sweep_to_json(&sweep, &cfg);
        if let Err(e) = std::fs::write(path, json) {
            return invalid(&format!("cannot write {}: {e}", path.display()));
        }
        println!("report written to {}", path.display());
    }
    if let Some(path) = csv {
        let flat = harness::sweep_to_csv(&sweep);
        if let Err(e) = std::fs::write(path, flat) {
            return invalid(&format!("cannot write {}: {e}", path.display()));
        }
        println!("csv written to {}", path.display());
    }

    if sweep.overall_pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn invalid(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_INVALID
}
