use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use noma_pa::cli::{cmd_allocate, cmd_orders, cmd_outage, OutageOptions};
use noma_pa::ordering::DEFAULT_MAX_ENUMERATE;
use noma_pa::{Error, Scenario};

/// Power allocation for downlink NOMA with per-user target rates.
#[derive(Parser)]
#[command(name = "noma-pa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a power allocation and print a JSON feasibility report.
    Allocate {
        /// Scenario file (JSON).
        scenario: PathBuf,
    },
    /// Rank SIC decoding orders by total required power (CSV, cheapest first).
    Orders {
        /// Scenario file (JSON).
        scenario: PathBuf,
        /// Refuse to enumerate more orders than this.
        #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATE)]
        max_enumerate: usize,
    },
    /// Evaluate per-user outage across an SNR grid (CSV).
    Outage {
        /// Scenario file (JSON).
        scenario: PathBuf,
        /// Include exact curves from the channel CDF.
        #[arg(long)]
        analytic: bool,
        /// Include Monte Carlo estimates.
        #[arg(long)]
        montecarlo: bool,
        /// Override the scenario's trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the SNR grid, as start:stop:step in dB.
        #[arg(long = "xi-db")]
        xi_db: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn worker_threads() -> Result<usize, Error> {
    match std::env::var("NOMA_PA_THREADS") {
        Ok(value) => value.trim().parse().map_err(|_| {
            Error::InvalidScenario(format!(
                "NOMA_PA_THREADS must be a nonnegative integer, got {value:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Allocate { scenario } => {
            let scenario = Scenario::from_path(scenario)?;
            println!("{}", cmd_allocate(&scenario)?);
        }
        Command::Orders { scenario, max_enumerate } => {
            let scenario = Scenario::from_path(scenario)?;
            print!("{}", cmd_orders(&scenario, max_enumerate)?);
        }
        Command::Outage { scenario, analytic, montecarlo, trials, seed, xi_db, out } => {
            let scenario = Scenario::from_path(scenario)?;
            let opts = OutageOptions {
                analytic,
                montecarlo,
                trials,
                seed,
                xi_grid_db: xi_db,
                threads: worker_threads()?,
            };
            let csv = cmd_outage(&scenario, &opts)?;
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": err.kind(), "message": err.to_string() })
            );
            match err {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
