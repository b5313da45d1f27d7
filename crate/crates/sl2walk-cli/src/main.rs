//! Command-line front end: parses one subcommand plus the shared flag set,
//! delegates to the matching runner, and writes the CSV to a file or stdout.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sl2walk_cli::{
    run_density, run_diameter, run_fibers, run_precutoff, run_simulate, run_uniform_prob,
    CliError, ExperimentConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "sl2walk",
    about = "Experiment harness for the random bracket walk on sl2(F_p)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distance-to-limit sweep with certified spectral bounds.
    Precutoff(CommonArgs),
    /// Exact coprime-offset probability against the Euler product.
    UniformProb(CommonArgs),
    /// Pairing-matrix fiber sizes, closed formula versus enumeration.
    Fibers(CommonArgs),
    /// Cover times and certificate weights for the reachability ball.
    Diameter(CommonArgs),
    /// Prime-density reference table: tails, greedy subsets, realized primes.
    Density(CommonArgs),
    /// Raw bracket-walk trajectories.
    Simulate(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Odd prime modulus.
    #[arg(long, default_value_t = 11)]
    p: u64,
    /// Number of independent trials.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Master seed; trial i draws from the (seed, i) counter stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated step counts.
    #[arg(long = "k-list", value_delimiter = ',', default_value = "1,10,100")]
    k_list: Vec<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cover-time search cap; 0 selects floor(10 ln p).
    #[arg(long, default_value_t = 0)]
    cap: u64,
    /// Sieve bound for prime searches.
    #[arg(long, default_value_t = 100)]
    bound: u64,
    /// Mixing threshold for certified stopping rules.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

impl CommonArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            p: self.p,
            trials: self.trials,
            master_seed: self.seed,
            k_list: self.k_list.clone(),
            eps: self.eps,
            bound: self.bound,
            cap: self.cap,
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (csv, out) = match &cli.command {
        Command::Precutoff(args) => (run_precutoff(&args.config())?, &args.out),
        Command::UniformProb(args) => (run_uniform_prob(&args.config())?, &args.out),
        Command::Fibers(args) => (run_fibers(&args.config())?, &args.out),
        Command::Diameter(args) => (run_diameter(&args.config())?, &args.out),
        Command::Density(args) => (run_density(&args.config())?, &args.out),
        Command::Simulate(args) => (run_simulate(&args.config())?, &args.out),
    };
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
