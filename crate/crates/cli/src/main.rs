// SPDX-License-Identifier: Apache-2.0
//! `mvbdag`: simulate, learn, enumerate, evaluate and bench.

mod bench;
mod commands;
mod grid;
mod method;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mvbdag::{Family, InteractionKind};

use crate::method::Method;

#[derive(Parser)]
#[command(name = "mvbdag", version, about = "Causal structure learning for binary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random graphs, weights and samples into one directory per replication.
    Simulate(SimulateArgs),
    /// Estimate a DAG from a dataset (or, for `enumerate`, a probability table).
    Learn(LearnArgs),
    /// List the model of every variable order of a probability table.
    Enumerate(EnumerateArgs),
    /// Compare an estimated graph with the true one at the CPDAG level.
    Evaluate(EvaluateArgs),
    /// Simulate, learn and evaluate over a grid; write detail and summary CSV.
    Bench(BenchArgs),
}

/// Graph and sampling grid shared by `simulate` and `bench`.
#[derive(Args, Clone, Debug)]
pub struct GridArgs {
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub p: Vec<usize>,
    /// Expected edges per node, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<usize>,
    /// Graph families (`er`, `sf`), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "er")]
    pub family: Vec<Family>,
    /// Samples per dataset.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Interaction map of the generating model.
    #[arg(long, default_value = "first+second")]
    pub tau: InteractionKind,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Base seed; replication `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit replication seeds, overriding `--reps` and `--seed`.
    #[arg(long, value_delimiter = ',')]
    pub rep_seeds: Option<Vec<u64>>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, env = "MVBDAG_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub grid: GridArgs,
}

/// Input shared by `learn` and `enumerate`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Binary dataset CSV.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Probability table (`# p=<p>` then one probability per line).
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateOpts {
    /// Coefficients with squared norm at or below this are treated as zero.
    /// Defaults to 1e-8 for tables and 0.05 for data.
    #[arg(long)]
    pub edge_tol: Option<f64>,
    /// Additive smoothing per cell when tabulating data.
    #[arg(long, default_value_t = 0.5)]
    pub smoothing: f64,
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long, default_value = "binotears")]
    pub method: Method,
    #[command(flatten)]
    pub input: InputArgs,
    /// Solver settings (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub enumerate: EnumerateOpts,
    #[arg(long, env = "MVBDAG_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub enumerate: EnumerateOpts,
    #[arg(long, env = "MVBDAG_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Estimated DAG edge list.
    #[arg(long)]
    pub estimate: PathBuf,
    /// True DAG edge list.
    #[arg(long)]
    pub truth: PathBuf,
    /// Metrics file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Methods to compare, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "binotears")]
    pub method: Vec<Method>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub enumerate: EnumerateOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => commands::simulate(&a).map(|_| true),
        Command::Learn(a) => commands::learn(&a).map(|_| true),
        Command::Enumerate(a) => commands::enumerate(&a).map(|_| true),
        Command::Evaluate(a) => commands::evaluate(&a).map(|_| true),
        Command::Bench(a) => bench::run(&a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
