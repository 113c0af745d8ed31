//! `smp`: thresholds, density evolution traces, capacity and finite-length
//! simulation for SMP decoding of nonbinary LDPC codes.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "smp", version, about = "Symbol message passing decoding of q-ary LDPC codes over the q-ary symmetric channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Decoding thresholds and Shannon limits for an ensemble over several field orders.
    Threshold(ThresholdArgs),
    /// Full density evolution trace at one channel parameter.
    De(DeArgs),
    /// Monte Carlo symbol error rate of a finite-length code.
    Simulate(SimulateArgs),
    /// Capacity of the q-ary symmetric channel.
    Capacity(CapacityArgs),
    /// Channel error probability at which capacity equals a rate.
    Shannon(ShannonArgs),
    /// Sample a code and write it in labeled-alist format.
    Codegen(CodegenArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Bounded,
}

impl From<Mode> for smp_core::DeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => smp_core::DeMode::Exact,
            Mode::Bounded => smp_core::DeMode::Bounded,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct DeOpts {
    #[arg(long, value_enum, default_value = "bounded")]
    mode: Mode,
    /// Maximum DE iterations.
    #[arg(long = "iters", default_value_t = 2000)]
    iters: usize,
    /// Convergence threshold on 1 - p0.
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ThresholdArgs {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    dc: usize,
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256,512")]
    q: Vec<usize>,
    #[command(flatten)]
    de: DeOpts,
    /// Bisection tolerance on epsilon.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct DeArgs {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    dc: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    de: DeOpts,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SimulateArgs {
    #[arg(long, required_unless_present = "load")]
    dv: Option<usize>,
    #[arg(long, required_unless_present = "load")]
    dc: Option<usize>,
    #[arg(long)]
    q: usize,
    /// Code length (number of variable nodes).
    #[arg(long, required_unless_present = "load")]
    n: Option<usize>,
    /// Load the code from a labeled-alist file instead of sampling one.
    #[arg(long)]
    load: Option<std::path::PathBuf>,
    /// Also write the code used to this file.
    #[arg(long)]
    save_code: Option<std::path::PathBuf>,
    /// Single channel error probability.
    #[arg(long, conflicts_with = "eps_grid", required_unless_present = "eps_grid")]
    eps: Option<f64>,
    /// Comma-separated channel error probabilities.
    #[arg(long, value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
    /// Simulation seed; also the code seed unless --code-seed is given.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    code_seed: Option<u64>,
    /// Decoding iterations.
    #[arg(long = "iters", default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 10_000)]
    max_frames: usize,
    /// Stop after this many frame errors (0 disables).
    #[arg(long, default_value_t = 100)]
    frame_errors: usize,
    /// Stop after this many symbol errors.
    #[arg(long)]
    symbol_errors: Option<usize>,
    /// Worker threads. Overrides SMP_WORKERS.
    #[arg(long, env = "SMP_WORKERS", default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CapacityArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ShannonArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    rate: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CodegenArgs {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    dc: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<smp_core::Error> for Failure {
    fn from(e: smp_core::Error) -> Self {
        match e {
            smp_core::Error::InvalidEnsemble(_)
            | smp_core::Error::InvalidArgument(_)
            | smp_core::Error::DegreeOutOfRange(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Threshold(a) => commands::threshold(&cli.command, a),
        Command::De(a) => commands::de(&cli.command, a),
        Command::Simulate(a) => commands::simulate(&cli.command, a),
        Command::Capacity(a) => commands::capacity(&cli.command, a),
        Command::Shannon(a) => commands::shannon(&cli.command, a),
        Command::Codegen(a) => commands::codegen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
