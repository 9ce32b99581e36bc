//! Command-line interface.
//!
//! Exit codes: 0 on success (all verifications passed), 1 on a mathematical
//! verification failure, 2 on usage or input errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use varseq_core::rdf::{estimate_maximal_norm, rdf_properties_report, rdf_transform, RdfConfig};
use varseq_core::spaces::luxemburg_norm;
use varseq_core::weights::{a1_constant, ar_constant, ars_constant, Weight};

use crate::config::{load_config, run_suite};
use crate::formats::{
    format_significant, load_seq, load_weight, parse_grid, resolve_exponent_arg, save_seq,
};
use crate::AppError;

#[derive(Parser, Debug)]
#[command(
    name = "varseq",
    version,
    about = "Variable-exponent sequence norms, discrete operators, weight constants, and verification suites",
    after_help = "Exponent arguments accept a JSON file path, `constant:C`, or `log-holder:PINF:CINF:LO:HI`."
)]
pub struct Cli {
    /// Seed for all stochastic procedures.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Relative tolerance for norm bisections.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub rel_tol: f64,
    /// Worker threads for the verification harness.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Luxemburg norm of a sequence.
    Norm(NormArgs),
    /// Apply a discrete operator and write the output sequence.
    Apply(ApplyArgs),
    /// Print a Muckenhoupt weight constant.
    Weight(WeightArgs),
    /// Run the Rubio de Francia iteration.
    Rdf(RdfArgs),
    /// Run a verification suite from a config file.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct NormArgs {
    /// Sequence file (JSON, or CSV with `index,value` lines).
    #[arg(long)]
    pub seq: PathBuf,
    /// Exponent: file path, `constant:C`, or `log-holder:PINF:CINF:LO:HI`.
    #[arg(long)]
    pub exp: String,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum OpArg {
    Maximal,
    Hilbert,
    Riesz,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long, value_enum)]
    pub op: OpArg,
    /// Order of the fractional maximal / Riesz potential.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seq: PathBuf,
    /// Output grid `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum WeightKindArg {
    Power,
    File,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum WeightClassArg {
    A1,
    Ar,
    Ars,
}

#[derive(Args, Debug)]
pub struct WeightArgs {
    #[arg(long, value_enum)]
    pub kind: WeightKindArg,
    /// Power-weight exponent (for `--kind power`).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Weight file in the JSON sequence format (for `--kind file`).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Grid `LO:HI` (only for `--kind power`; file weights carry their own).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub class: WeightClassArg,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RdfArgs {
    /// Non-negative input sequence.
    #[arg(long)]
    pub seq: PathBuf,
    /// Exponent of the space the iteration acts on.
    #[arg(long)]
    pub exp: String,
    /// Truncation order K.
    #[arg(long)]
    pub k: usize,
    /// Norm parameter A; defaults to 1.05 x the empirical maximal-norm estimate.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a JSON report of the iteration properties.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for report JSON/CSV files.
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
}

/// Run a parsed invocation; returns the process exit code.
pub fn dispatch(cli: Cli) -> Result<i32, AppError> {
    match cli.command {
        Command::Norm(args) => {
            let a = load_seq(&args.seq)?;
            let p = resolve_exponent_arg(&args.exp)?;
            if cli.rel_tol.is_nan() || cli.rel_tol <= 0.0 {
                return Err(AppError::input("--rel-tol must be positive".to_string()));
            }
            println!("{}", format_significant(luxemburg_norm(&a, &p, cli.rel_tol), 15));
            Ok(0)
        }
        Command::Apply(args) => {
            let a = load_seq(&args.seq)?;
            let grid = parse_grid(&args.grid)?;
            let out = match args.op {
                OpArg::Maximal => {
                    let alpha = args.alpha.unwrap_or(0.0);
                    varseq_core::operators::fractional_maximal(&a, alpha, grid)?
                }
                OpArg::Hilbert => varseq_core::operators::hilbert_transform(&a, grid),
                OpArg::Riesz => {
                    let alpha = args.alpha.ok_or_else(|| {
                        AppError::input("--alpha is required for --op riesz".to_string())
                    })?;
                    varseq_core::operators::riesz_potential(&a, alpha, grid)?
                }
            };
            save_seq(&out, &args.out)?;
            Ok(0)
        }
        Command::Weight(args) => {
            let w = load_weight_arg(&args)?;
            let constant = match args.class {
                WeightClassArg::A1 => a1_constant(&w),
                WeightClassArg::Ar => {
                    let r = args.r.ok_or_else(|| {
                        AppError::input("--r is required for --class ar".to_string())
                    })?;
                    ar_constant(&w, r)?
                }
                WeightClassArg::Ars => {
                    let r = args.r.ok_or_else(|| {
                        AppError::input("--r is required for --class ars".to_string())
                    })?;
                    let s = args.s.ok_or_else(|| {
                        AppError::input("--s is required for --class ars".to_string())
                    })?;
                    ars_constant(&w, r, s)?
                }
            };
            println!("{}", format_significant(constant, 15));
            Ok(0)
        }
        Command::Rdf(args) => {
            let b = load_seq(&args.seq)?;
            let p_dual = resolve_exponent_arg(&args.exp)?;
            let grid = parse_grid(&args.grid)?;
            let norm_bound = match args.a {
                Some(a) => a,
                None => 1.05 * estimate_maximal_norm(&p_dual, 200, cli.seed, grid),
            };
            let cfg = RdfConfig::new(args.k, norm_bound, grid)?;
            let transformed = rdf_transform(&b, &cfg)?;
            save_seq(&transformed, &args.out)?;
            if let Some(report_path) = &args.report {
                let report = rdf_properties_report(&b, &cfg, &p_dual, cli.rel_tol)?;
                let payload = json!({
                    "A_used": report.norm_bound,
                    "K": report.truncation_order,
                    "checks": {
                        "i": report.pointwise_ok,
                        "ii": report.norm_ok,
                        "iii": report.domination_ok,
                    },
                    "a1_constant": report.a1_constant,
                });
                std::fs::write(report_path, serde_json::to_string_pretty(&payload).unwrap() + "\n")
                    .map_err(|e| AppError::input(format!("cannot write report: {e}")))?;
                if !report.all_ok() {
                    eprintln!("rdf property check failed: {report:?}");
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let config = load_config(&args.config).map_err(|e| AppError::input(e.to_string()))?;
            let reports = run_suite(
                &config,
                Some(cli.seed),
                Some(&args.out),
                cli.rel_tol,
                cli.jobs.max(1),
                |report| {
                    println!(
                        "[{}] {} max_ratio={}{}{}",
                        if report.ok { "ok" } else { "FAIL" },
                        report.name,
                        format_significant(report.max_ratio, 15),
                        report
                            .growth_factor
                            .map(|g| format!(" growth={}", format_significant(g, 15)))
                            .unwrap_or_default(),
                        if report.expect_fail { " (negative control)" } else { "" },
                    );
                },
            )
            .map_err(|e| AppError::input(e.to_string()))?;
            let failed = reports.iter().filter(|r| !r.ok).count();
            println!(
                "{} checks, {} ok, {} failed",
                reports.len(),
                reports.len() - failed,
                failed
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn load_weight_arg(args: &WeightArgs) -> Result<Weight, AppError> {
    match args.kind {
        WeightKindArg::Power => {
            let delta = args
                .delta
                .ok_or_else(|| AppError::input("--delta is required for --kind power".to_string()))?;
            let grid = args
                .grid
                .as_deref()
                .ok_or_else(|| AppError::input("--grid is required for --kind power".to_string()))?;
            Ok(Weight::power(delta, parse_grid(grid)?))
        }
        WeightKindArg::File => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| AppError::input("--file is required for --kind file".to_string()))?;
            load_weight(path)
        }
    }
}
