use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chemolab::commands::{self, CommandError};
use chemolab::exit_codes;

/// Simulation laboratory for chemotaxis models with nonlinear diffusion and
/// nonlocal logistic damping: hypothesis checks, single runs with blow-up
/// detection, and bounded/blow-up parameter atlases.
#[derive(Parser)]
#[command(name = "chemolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the boundedness hypotheses for a parameter set.
    Check(CheckArgs),
    /// Integrate one configured experiment and write its reports.
    Run(RunArgs),
    /// Sweep a 1-D or 2-D parameter grid and emit the verdict atlas.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Read the model block from a config file instead of inline flags.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Space dimension (n >= 3).
    #[arg(short, long, default_value_t = 3)]
    n: u32,
    /// Diffusion exponent.
    #[arg(short, long, default_value_t = 1.0)]
    m: f64,
    /// Growth coefficient.
    #[arg(short, long, default_value_t = 1.0)]
    a: f64,
    /// Damping coefficient.
    #[arg(short, long, default_value_t = 1.0)]
    b: f64,
    /// Local death exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Nonlocal exponent (>= 1).
    #[arg(long)]
    beta: Option<f64>,
    /// Growth exponent.
    #[arg(long)]
    eta: Option<f64>,
    /// attractive | repulsive.
    #[arg(long, default_value = "attractive")]
    sign: String,
    /// Exit 3 unless h1_holds matches.
    #[arg(long)]
    expect_h1: Option<bool>,
    /// Exit 3 unless h2_holds matches.
    #[arg(long)]
    expect_h2: Option<bool>,
    /// Also tabulate the iteration exponents up to this k (needs the
    /// attractive hypothesis to hold).
    #[arg(long, value_name = "K")]
    moser: Option<u32>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file.
    #[arg(long, short)]
    config: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file with a [sweep] section.
    #[arg(long, short)]
    config: PathBuf,
    /// Add the theory-consistency column to the atlas CSV.
    #[arg(long)]
    compare_theory: bool,
}

fn dispatch(cli: Cli) -> Result<u8, CommandError> {
    match cli.command {
        Command::Check(args) => {
            let params = if let Some(path) = &args.config {
                commands::load_config(path)?.model
            } else {
                let missing = |what: &str| CommandError {
                    code: exit_codes::INVALID_INPUT,
                    message: format!("--{what} is required without --config"),
                };
                commands::inline_params(
                    args.n,
                    args.m,
                    args.a,
                    args.b,
                    args.alpha.ok_or_else(|| missing("alpha"))?,
                    args.beta.ok_or_else(|| missing("beta"))?,
                    args.eta.ok_or_else(|| missing("eta"))?,
                    &args.sign,
                )?
            };
            commands::cmd_check(
                &params,
                args.expect_h1,
                args.expect_h2,
                args.moser,
                args.json.as_deref(),
            )
        }
        Command::Run(args) => {
            let cfg = commands::load_config(&args.config)?;
            commands::cmd_run(&cfg)
        }
        Command::Sweep(args) => {
            let cfg = commands::load_config(&args.config)?;
            commands::cmd_sweep(&cfg, args.compare_theory)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
