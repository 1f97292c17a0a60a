//! Command-line front end for the exact threshold machinery and the
//! floating-point functional laboratory.
//!
//! Five subcommands: `compute` emits the full threshold report of one
//! divisor, `sweep` samples thresholds along a segment in the divisor cone,
//! `check` runs one seeded exact property suite, `mt-probe` runs the
//! Moser–Trudinger concentration probe or a laboratory check suite, and
//! `suite` runs the whole acceptance battery.
//!
//! Exit codes: 0 success, 1 property failure, 2 parse or input error,
//! 3 precondition failure (the message names the failed check).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use toristab::cone_explorer::{continuity_sweep, sweep_csv, sweep_csv_exact, SweepSpec};
use toristab::mt::{concentration_probe, probe_csv, FunctionalContext, LogGrid};
use toristab::rational::parse_rat;
use toristab::report::threshold_report;
use toristab::suite::{run_acceptance, run_check, run_mt_check, SuiteOutcome};
use toristab::toric::{ToricRDivisor, ToricVariety};
use toristab::varieties::{builtin, parse_divisor_coeffs, parse_variety, BUILTIN_NAMES};
use toristab::{Error, Rat, Result};

#[derive(Parser)]
#[command(
    name = "toristab",
    version,
    about = "Exact stability thresholds for toric R-divisors, with a numeric \
             Moser-Trudinger laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute delta, alpha, s, beta, mu and the inequality checks for one divisor.
    Compute(ComputeArgs),
    /// Sample the thresholds along the segment L + gamma*S and check continuity envelopes.
    Sweep(SweepArgs),
    /// Run one seeded exact property suite.
    Check(CheckArgs),
    /// Probe Moser-Trudinger quotients along the concentration family, or run a laboratory check.
    MtProbe(MtProbeArgs),
    /// Run the complete acceptance battery, one line per criterion.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Builtin variety name (P1, P2, P3, P1xP1, dP1) or path to a variety file.
    #[arg(long)]
    variety: String,
    /// Comma-separated rational coefficients in ray order, e.g. `1,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
    /// Report format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write the report here instead of stdout (single atomic write).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Builtin variety name or path to a variety file.
    #[arg(long)]
    variety: String,
    /// Coefficients of the base divisor L.
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
    /// Coefficients of the sweep direction S.
    #[arg(long, allow_hyphen_values = true)]
    direction: String,
    /// Exact gamma segment `a:b`, endpoints as rationals.
    #[arg(long, default_value = "0:1/2", allow_hyphen_values = true)]
    gamma_range: String,
    /// Number of evenly spaced samples (at least 2).
    #[arg(long, default_value_t = 11)]
    steps: usize,
    /// Write the decimal CSV here and the exact CSV to the `.exact` sibling;
    /// without this flag the decimal CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name: bishop, sandwich, comparison or scaling.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Optional variety input, parsed and validated before the suite runs so
    /// malformed files fail fast; the suites draw from the builtin registry.
    #[arg(long)]
    variety: Option<String>,
}

#[derive(Args)]
struct MtProbeArgs {
    /// Run a laboratory check suite (ding, ij, cocycle or jcomparison)
    /// instead of the concentration probe.
    #[arg(long)]
    check: Option<String>,
    /// Nodes per grid axis. Defaults: 1537 for the probe, 257 (dim 1) or
    /// 96 (dim 2) for checks.
    #[arg(long)]
    grid: Option<usize>,
    /// Half-width of the log-coordinate box. Defaults: 24 for the probe,
    /// 18 for checks.
    #[arg(long)]
    s_max: Option<f64>,
    /// Comma-separated positive rational class coefficients, one per axis.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    class: String,
    /// Rational twist parameter for the probe background.
    #[arg(long, conflicts_with = "check", allow_hyphen_values = true)]
    twist: Option<String>,
    /// Probe exponents, comma-separated.
    #[arg(long, default_value = "1.6,1.8,2.0,2.2,2.4", allow_hyphen_values = true)]
    lambdas: String,
    /// Concentration parameters in (0, 1), at least two, comma-separated.
    #[arg(long, default_value = "1e-2,1e-3,1e-4,1e-5,1e-6", allow_hyphen_values = true)]
    c_values: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the CSV here instead of stdout (single atomic write).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Parse and input errors exit 2; everything else that can surface from the
/// library is a violated mathematical precondition and exits 3. Property
/// failures never reach this path (they exit 1 through their subcommand).
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidFan(_)
        | Error::NotSmooth(_)
        | Error::NotComplete(_)
        | Error::NotProjective
        | Error::Dimension { .. } => 2,
        _ => 3,
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compute(args) => cmd_compute(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Check(args) => cmd_check(args),
        Command::MtProbe(args) => cmd_mt_probe(args),
        Command::Suite(args) => cmd_suite(args),
    }
}

fn cmd_compute(args: ComputeArgs) -> Result<ExitCode> {
    let divisor = load_divisor(&args.variety, &args.divisor)?;
    let report = threshold_report(&divisor)?;
    let text = match args.format.as_str() {
        "csv" => report.to_csv(),
        _ => report.to_json(),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let variety = load_variety(&args.variety)?;
    let base = divisor_on(&variety, &args.divisor)?;
    let direction = divisor_on(&variety, &args.direction)?;
    let (gamma_min, gamma_max) = parse_gamma_range(&args.gamma_range)?;
    let spec = SweepSpec {
        base,
        direction,
        gamma_min,
        gamma_max,
        steps: args.steps,
    };
    let rows = continuity_sweep(&spec)?;
    match args.out.as_deref() {
        Some(path) => {
            write_atomic(path, &sweep_csv(&rows))?;
            write_atomic(&exact_sibling(path), &sweep_csv_exact(&rows))?;
        }
        None => print!("{}", sweep_csv(&rows)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode> {
    if let Some(spec) = &args.variety {
        load_variety(spec)?;
    }
    let outcome = run_check(&args.suite, args.seed)?;
    Ok(report_outcome(&outcome))
}

fn cmd_mt_probe(args: MtProbeArgs) -> Result<ExitCode> {
    let class = parse_rat_list(&args.class)?;
    let dim = class.len();
    if let Some(name) = &args.check {
        let nodes = args.grid.unwrap_or(if dim == 1 { 257 } else { 96 });
        let grid = LogGrid::new(dim, nodes, args.s_max.unwrap_or(18.0), class)?;
        let outcome = run_mt_check(name, &grid, args.seed)?;
        return Ok(report_outcome(&outcome));
    }
    let nodes = args.grid.unwrap_or(1537);
    let grid = LogGrid::new(dim, nodes, args.s_max.unwrap_or(24.0), class)?;
    let ctx = match &args.twist {
        Some(text) => FunctionalContext::twisted(grid, parse_rat(text)?)?,
        None => FunctionalContext::untwisted(grid),
    };
    let lambdas = parse_f64_list(&args.lambdas)?;
    let c_values = parse_f64_list(&args.c_values)?;
    let rows = concentration_probe(&ctx, &lambdas, &c_values)?;
    emit(args.out.as_deref(), &probe_csv(&rows))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(args: SuiteArgs) -> Result<ExitCode> {
    let outcomes = run_acceptance(args.seed);
    let mut all_passed = true;
    for (index, outcome) in outcomes.iter().enumerate() {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:02} {:<24} {}  {}",
            index + 1,
            outcome.name,
            status,
            outcome.detail
        );
        all_passed &= outcome.passed;
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Prints one suite outcome and converts it to the process exit code:
/// failures exit 1 with the counterexample in the printed detail.
fn report_outcome(outcome: &SuiteOutcome) -> ExitCode {
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{} {}  {}", outcome.name, status, outcome.detail);
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Resolves a builtin name or reads and parses a variety file.
fn load_variety(spec: &str) -> Result<Arc<ToricVariety>> {
    if let Some(variety) = builtin(spec) {
        return Ok(variety);
    }
    let text = fs::read_to_string(spec).map_err(|e| {
        Error::Parse(format!(
            "cannot read variety file '{spec}' (builtins: {}): {e}",
            BUILTIN_NAMES.join(", ")
        ))
    })?;
    parse_variety(&text)
}

fn divisor_on(variety: &Arc<ToricVariety>, coeffs: &str) -> Result<ToricRDivisor> {
    let coeffs = parse_divisor_coeffs(coeffs, variety.rays().len())?;
    ToricRDivisor::new(variety.clone(), coeffs)
}

fn load_divisor(variety: &str, coeffs: &str) -> Result<ToricRDivisor> {
    let variety = load_variety(variety)?;
    divisor_on(&variety, coeffs)
}

fn parse_gamma_range(text: &str) -> Result<(Rat, Rat)> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| {
        Error::Parse(format!("gamma range '{text}' is not of the form a:b"))
    })?;
    Ok((parse_rat(lo)?, parse_rat(hi)?))
}

fn parse_rat_list(text: &str) -> Result<Vec<Rat>> {
    text.split(',').map(|cell| parse_rat(cell.trim())).collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|cell| {
            let cell = cell.trim();
            cell.parse::<f64>()
                .map_err(|e| Error::Parse(format!("invalid number '{cell}': {e}")))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes through a temporary sibling and renames, so readers of `path`
/// never observe a partial file.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp_name = path
        .file_name()
        .map(|name| name.to_os_string())
        .ok_or_else(|| {
            Error::Parse(format!("output path '{}' has no file name", path.display()))
        })?;
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let io_err =
        |e: std::io::Error| Error::Parse(format!("cannot write '{}': {e}", path.display()));
    fs::write(&tmp, text).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// `runs/sweep.csv` -> `runs/sweep.exact.csv`.
fn exact_sibling(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sweep");
    let name = match path.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.exact.{ext}"),
        None => format!("{stem}.exact.csv"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use toristab::suite::{CHECK_SUITES, MT_CHECK_SUITES};

    #[test]
    fn gamma_ranges_parse_exactly() {
        let (lo, hi) = parse_gamma_range("0:1/2").unwrap();
        assert_eq!(lo, toristab::rational::rat_i(0));
        assert_eq!(hi, toristab::rational::rat(1, 2));
        assert!(parse_gamma_range("1/2").is_err());
        assert!(parse_gamma_range("a:b").is_err());
    }

    #[test]
    fn exact_sibling_keeps_directory_and_extension() {
        assert_eq!(
            exact_sibling(Path::new("runs/sweep.csv")),
            PathBuf::from("runs/sweep.exact.csv")
        );
        assert_eq!(
            exact_sibling(Path::new("plain")),
            PathBuf::from("plain.exact.csv")
        );
    }

    #[test]
    fn parse_errors_exit_two_and_preconditions_three() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::NotSmooth("x".into())), 2);
        assert_eq!(exit_code(&Error::NotBig), 3);
        assert_eq!(exit_code(&Error::NotAmple), 3);
        assert_eq!(exit_code(&Error::EpsilonTooLarge), 3);
        assert_eq!(exit_code(&Error::InvalidGrid("x".into())), 3);
    }

    #[test]
    fn check_suite_names_stay_in_sync_with_the_library() {
        for name in CHECK_SUITES {
            assert!(run_check(name, 1).is_ok() || name.is_empty());
        }
        assert!(run_check("nope", 1).is_err());
        let grid = LogGrid::new(1, 129, 18.0, vec![toristab::rational::rat_i(1)]).unwrap();
        for name in MT_CHECK_SUITES {
            assert!(run_mt_check(name, &grid, 1).is_ok());
        }
    }
}
