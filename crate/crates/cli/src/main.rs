//! `quasispec`: words, spectra, trace maps, Gordon certificates, Lyapunov
//! exponents and transport moments of quasiperiodic Schrödinger operators.
//!
//! Exit codes: 0 success, 2 usage or model error, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmd;
mod error;
mod model;
mod output;

use error::CliResult;
use model::ModelArgs;
use output::OutputArgs;

#[derive(Debug, Parser)]
#[command(name = "quasispec", version, about = "Spectral and transport computations for quasiperiodic Schrödinger operators")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Seed for sampled energies and initial vectors.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symbol word and potential values at sites 1..length.
    Generate(cmd::generate::Args),
    /// Factor complexity p(n) of a prefix.
    Complexity(cmd::complexity::Args),
    /// Band set of a periodic approximant.
    Spectrum(cmd::spectrum::Args),
    /// Trace orbits and escape certificates.
    Tracemap(cmd::tracemap::Args),
    /// Gordon two- and three-block certificates.
    Gordon(cmd::gordon::Args),
    /// Finite-length Lyapunov exponents.
    Lyapunov(cmd::lyapunov::Args),
    /// Averaged position moments and transport exponents.
    Dynamics(cmd::dynamics::Args),
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::CliError::usage(format!("--threads: {e}")))?;
    }
    let model = model::Model::resolve(&cli.model)?;
    let out = &cli.output;
    match &cli.command {
        Command::Generate(a) => cmd::generate::run(&model, a, out),
        Command::Complexity(a) => cmd::complexity::run(&model, a, out),
        Command::Spectrum(a) => cmd::spectrum::run(&model, a, out),
        Command::Tracemap(a) => cmd::tracemap::run(&model, a, out),
        Command::Gordon(a) => cmd::gordon::run(&model, a, cli.seed, out),
        Command::Lyapunov(a) => cmd::lyapunov::run(&model, a, out),
        Command::Dynamics(a) => cmd::dynamics::run(&model, a, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
