//! `qinv`: quadratic-invariance checks on JSON problem files.

mod commands;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qinv_core::oracle::ExperimentConfig;
use qinv_core::qi::QiMethod;

use commands::{Output, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "qinv",
    version,
    about = "Quadratic invariance over commutative rings"
)]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Generators,
    Sparsity,
}

#[derive(Subcommand)]
enum Command {
    /// Decide QI, adjugate invariance and h-invariance for a problem file
    CheckQi {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Apply h(K) = -K(I - GK)^-1 to a controller
    HMap {
        file: PathBuf,
        /// JSON controller: a matrix of strings or {"k": matrix}
        #[arg(long)]
        k: PathBuf,
    },
    /// Describe the achievable closed-loop maps
    ClosedLoop { file: PathBuf },
    /// Seeded exhaustive comparison of QI and h-invariance over Z/pZ
    Oracle {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        gens: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, env = "QINV_SEED", default_value_t = 42)]
        seed: u64,
        /// Include wall-clock runtime (makes output run-dependent)
        #[arg(long)]
        timing: bool,
    },
    /// Search for a left-invertible Vandermonde matrix
    Vandermonde {
        /// integers, rationals, zbeta or mod:p
        #[arg(long)]
        ring: String,
        /// Comma-separated candidate points, e.g. 0,1,2,b
        #[arg(long)]
        points: String,
        /// Width of the Vandermonde matrix
        #[arg(long)]
        n: usize,
        /// Largest number of points to try (defaults to all candidates)
        #[arg(long)]
        n_max: Option<usize>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::CheckQi { file, method } => {
            let method = match method {
                MethodArg::Auto => QiMethod::Auto,
                MethodArg::Generators => QiMethod::Generators,
                MethodArg::Sparsity => QiMethod::Sparsity,
            };
            commands::check_qi(file, method)
        }
        Command::HMap { file, k } => commands::h_map_cmd(file, k),
        Command::ClosedLoop { file } => commands::closed_loop(file),
        Command::Oracle {
            p,
            m,
            n,
            gens,
            trials,
            seed,
            timing,
        } => {
            let cfg = ExperimentConfig {
                p: *p,
                m: *m,
                n: *n,
                gens: *gens,
                trials: *trials,
                seed: *seed,
            };
            commands::oracle(&cfg, *timing)
        }
        Command::Vandermonde {
            ring,
            points,
            n,
            n_max,
        } => commands::vandermonde(ring, points, *n, *n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON value")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
