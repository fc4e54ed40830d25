//! `zyglab`: reproducible regularity experiments.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use zyglab::Error;

use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "zyglab", version, about = "Zygmund-class regularity of Colombeau nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a signal or net and write its report, growth table and scalogram.
    Analyze(RunArgs),
    /// Solve an ODE or transport problem and compare with the predicted class.
    Solve(RunArgs),
    /// Write the reference corpus and its manifest.
    Corpus(RunArgs),
    /// Write kernel profiles and moment defects.
    Kernels {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_count: Option<usize>,
    /// Highest derivative order in the growth table.
    #[arg(long)]
    orders: Option<usize>,
    /// Analysis window as `lo,hi`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(f64, f64)>,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
    Ok((p(lo)?, p(hi)?))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidGrid(_) => "invalid_grid",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::NonFiniteMultiplier { .. } => "non_finite_multiplier",
        Error::EmptyWindow { .. } => "empty_window",
        Error::InsufficientData(_) => "insufficient_data",
        Error::GridMismatch => "grid_mismatch",
        Error::BoundsViolation { .. } => "bounds_violation",
        Error::Numerical(_) => "numerical",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

fn fail(e: &Error) -> ExitCode {
    let code = if e.is_numerical() { 3 } else { 2 };
    let body = json!({ "error": error_kind(e), "message": e.to_string(), "exit_code": code });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn run(cmd: Command) -> zyglab::Result<serde_json::Value> {
    let (name, args) = match cmd {
        Command::Kernels { out } => return commands::kernels(&out),
        Command::Analyze(a) => ("analyze", a),
        Command::Solve(a) => ("solve", a),
        Command::Corpus(a) => ("corpus", a),
    };
    let mut config = RunConfig::load(args.config.as_deref())?;
    config.apply(&Overrides {
        eps_min: args.eps_min,
        eps_max: args.eps_max,
        eps_count: args.eps_count,
        orders: args.orders,
        window: args.window,
    });
    let run = config.resolve(name)?;
    match name {
        "analyze" => commands::analyze(&run, &args.out),
        "solve" => commands::solve(&run, &args.out),
        _ => commands::corpus(&run, &args.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("ZYGLAB_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) => zyglab::exec::init_threads(n),
            Err(_) => return fail(&Error::InvalidArgument(format!("ZYGLAB_THREADS={v} is not a count"))),
        }
    }
    match run(cli.command) {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("json value"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
