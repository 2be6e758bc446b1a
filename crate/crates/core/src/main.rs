use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use amtrap::convexity::{self, classify, AMParams};
use amtrap::harness::corpus::builtin_corpus;
use amtrap::harness::sweep::{run_sweep, SweepConfig};
use amtrap::harness::tightness::run_tightness;
use amtrap::harness::verify::{verify_identities, DEFAULT_VERIFY_TOL};
use amtrap::harness::HarnessError;

/// Trapezoid-gap bounds under (alpha, m)-convexity: sweeps, tightness
/// tables, and self-checks.
#[derive(Parser)]
#[command(name = "amtrap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON sweep configuration; defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the configured output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity and inequality self-checks
    Verify {
        /// Tighten check thresholds down to this tolerance
        #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
        tol: f64,
    },
    /// Evaluate the configured parameter grid and write a report
    Sweep(ConfigArgs),
    /// Aggregate which bound wins per (alpha, m, q) cell
    Tightness(ConfigArgs),
    /// Grid-check (alpha, m)-convexity of |f''|^q for one corpus function
    CheckConvexity {
        /// Corpus function id (e.g. quadratic, cubic, exp)
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Grid points per axis
        #[arg(long, default_value_t = convexity::DEFAULT_GRID_N)]
        grid_n: usize,
        /// Violation tolerance
        #[arg(long, default_value_t = convexity::DEFAULT_TOL)]
        tol: f64,
    },
}

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;

fn load_config(args: &ConfigArgs) -> Result<SweepConfig, HarnessError> {
    let mut config = match &args.config {
        Some(path) => SweepConfig::from_json_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(out) = &args.out {
        config.output_path = out.display().to_string();
    }
    if let Some(tol) = args.tol {
        config.quad_tol = tol;
        config.validate()?;
    }
    Ok(config)
}

fn run_verify(tol: f64) -> ExitCode {
    if !(tol.is_finite() && tol > 0.0) {
        eprintln!("--tol must be a positive number, got {tol}");
        return ExitCode::from(EXIT_BAD_INPUT);
    }
    let summary = verify_identities(tol);
    for check in &summary.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<28} residual {:>12.3e}  threshold {:>9.1e}",
            check.name, check.residual, check.threshold
        );
    }
    if summary.all_pass() {
        println!("all {} checks passed", summary.checks.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "{} of {} checks failed",
            summary.failures().len(),
            summary.checks.len()
        );
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}

fn run_sweep_cmd(args: &ConfigArgs) -> Result<ExitCode, HarnessError> {
    let config = load_config(args)?;
    let summary = run_sweep(&config)?;
    println!(
        "wrote {} rows ({} evaluated, {} skipped) to {}",
        summary.rows.len(),
        summary.evaluated,
        summary.skipped,
        config.output_path
    );
    if summary.dominance_violations > 0 {
        println!(
            "dominance violations under a passed convexity gate: {}",
            summary.dominance_violations
        );
        Ok(ExitCode::from(EXIT_FAILED_CHECK))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn run_tightness_cmd(args: &ConfigArgs) -> Result<ExitCode, HarnessError> {
    let config = load_config(args)?;
    let rows = run_tightness(&config)?;
    println!("wrote {} cells to {}", rows.len(), config.output_path);
    Ok(ExitCode::SUCCESS)
}

fn run_check_convexity(
    function: &str,
    alpha: f64,
    m: f64,
    q: f64,
    grid_n: usize,
    tol: f64,
) -> Result<ExitCode, String> {
    let corpus = builtin_corpus();
    let fspec = corpus.iter().find(|f| f.id() == function).ok_or_else(|| {
        let ids: Vec<&str> = corpus.iter().map(|f| f.id()).collect();
        format!("unknown function {function:?}; corpus: {}", ids.join(", "))
    })?;
    let params = AMParams::new(alpha, m, q).map_err(|e| e.to_string())?;
    let verdict =
        convexity::check_abs_f2_q(fspec, &params, grid_n, tol).map_err(|e| e.to_string())?;
    println!(
        "|f''|^q for {function:?} against {} (alpha = {alpha}, m = {m}, q = {q})",
        classify(alpha, m)
    );
    if verdict.holds {
        println!(
            "not falsified on a {grid_n}^3 grid (worst margin {:.3e} <= tol {tol:.1e})",
            verdict.margin
        );
        Ok(ExitCode::SUCCESS)
    } else {
        let w = verdict.witness.expect("falsified verdicts carry a witness");
        println!(
            "falsified: margin {:.6e} at x = {}, y = {}, t = {}",
            verdict.margin, w.x, w.y, w.t
        );
        Ok(ExitCode::from(EXIT_FAILED_CHECK))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // HarnessError is always a config or I/O problem, never a failed
    // inequality, so it maps to the bad-input exit code
    let report = |e: HarnessError| {
        eprintln!("{e}");
        ExitCode::from(EXIT_BAD_INPUT)
    };
    match &cli.command {
        Command::Verify { tol } => run_verify(*tol),
        Command::Sweep(args) => run_sweep_cmd(args).unwrap_or_else(report),
        Command::Tightness(args) => run_tightness_cmd(args).unwrap_or_else(report),
        Command::CheckConvexity {
            function,
            alpha,
            m,
            q,
            grid_n,
            tol,
        } => run_check_convexity(function, *alpha, *m, *q, *grid_n, *tol).unwrap_or_else(|e| {
            eprintln!("{e}");
            ExitCode::from(EXIT_BAD_INPUT)
        }),
    }
}
