//! `treejacobi`: exact computations for Jacobi matrices on one-ended trees.
//!
//! Every subcommand prints a JSON report on stdout and a short human summary
//! on stderr. Exit status: 0 when all checks pass, 1 when a check fails, 2 on
//! usage or input errors.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

use commands::classical::{classical_cmd, ClassicalArgs};
use commands::construct::{construct_cmd, ConstructArgs};
use commands::family::{poly_cmd, spectrum_cmd, PolyArgs, SpectrumArgs};
use commands::growth::{growth_cmd, GrowthArgs};
use commands::solve::{solve_cmd, wronskian_cmd, SolveArgs};
use commands::verify::{verify_cmd, VerifyArgs};
use commands::Global;
use input::{CliError, CliResult};
use report::ReportBuilder;

const THREADS_VAR: &str = "TREEJACOBI_THREADS";

#[derive(Parser, Debug)]
#[command(name = "treejacobi", version, about = "Exact computations for Jacobi matrices on one-ended trees")]
struct Cli {
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include full tables in the report.
    #[arg(long, global = true)]
    full: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The polynomial family at a vertex.
    Poly(PolyArgs),
    /// Spectrum of a truncation from the polynomial family, checked against det(z - J).
    Spectrum(SpectrumArgs),
    /// The solution and associated solution at a nonreal z.
    Solve(SolveArgs),
    /// Wronskian of the solution pair along the path.
    Wronskian(SolveArgs),
    /// Norm and Carleman-sum profiles over increasing depths.
    Growth(GrowthArgs),
    /// Path (one-dimensional) Jacobi matrices.
    Classical(ClassicalArgs),
    /// Build an explicit example, write its tree spec and verify it.
    Construct(ConstructArgs),
    /// Run every check on a tree and on a seeded random corpus.
    VerifyAll(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Poly(_) => "poly",
            Command::Spectrum(_) => "spectrum",
            Command::Solve(_) => "solve",
            Command::Wronskian(_) => "wronskian",
            Command::Growth(_) => "growth",
            Command::Classical(_) => "classical",
            Command::Construct(_) => "construct",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    fn args(&self) -> Value {
        fn value(args: &impl Serialize) -> Value {
            serde_json::to_value(args).expect("arguments serialize")
        }
        match self {
            Command::Poly(a) => value(a),
            Command::Spectrum(a) => value(a),
            Command::Solve(a) | Command::Wronskian(a) => value(a),
            Command::Growth(a) => value(a),
            Command::Classical(a) => value(a),
            Command::Construct(a) => value(a),
            Command::VerifyAll(a) => value(a),
        }
    }

    fn run(&self, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
        match self {
            Command::Poly(a) => poly_cmd(a, global, r),
            Command::Spectrum(a) => spectrum_cmd(a, global, r),
            Command::Solve(a) => solve_cmd(a, global, r),
            Command::Wronskian(a) => wronskian_cmd(a, global, r),
            Command::Growth(a) => growth_cmd(a, global, r),
            Command::Classical(a) => classical_cmd(a, global, r),
            Command::Construct(a) => construct_cmd(a, global, r),
            Command::VerifyAll(a) => verify_cmd(a, global, r),
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn emit(builder: ReportBuilder) -> ExitCode {
    let (report, notes) = builder.finish();
    let mut stdout = std::io::stdout().lock();
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if writeln!(stdout, "{text}").is_err() {
        return ExitCode::from(2);
    }
    let mut err = std::io::stderr().lock();
    // the human summary is best effort
    let _ = writeln!(err, "treejacobi {}", report.command.name);
    for line in notes {
        let _ = writeln!(err, "  {line}");
    }
    for c in &report.checks {
        let _ = writeln!(err, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(err, "{} of {} checks passed", report.summary.passed, report.summary.checks);
    if report.summary.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let global = Global { seed: cli.seed, full: cli.full };
    let mut args = match cli.command.args() {
        Value::Object(map) => map,
        _ => Map::new(),
    };
    args.insert("seed".into(), Value::from(cli.seed));
    args.insert("full".into(), Value::from(cli.full));
    let mut builder = ReportBuilder::new(cli.command.name(), args);
    match cli.command.run(global, &mut builder) {
        Ok(()) => emit(builder),
        Err(e) if e.exit_code() == 1 => {
            builder.check("computation", false, e.to_string());
            emit(builder)
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run `treejacobi --help` for usage");
            ExitCode::from(e.exit_code())
        }
    }
}
