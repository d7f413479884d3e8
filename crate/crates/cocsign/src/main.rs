use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cocsign::cli::{
    run_feasibility, run_oracle, run_search, run_simulate, run_sweep, FeasibilityInputs,
};
use cocsign::config::{RunConfig, SweepConfig};

/// Simulate a coCSign entangling gate on asynchronous atomic excitations in
/// coupled optical cavities.
#[derive(Parser)]
#[command(name = "cocsign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the gate on all four logical inputs and write result files.
    Simulate {
        /// TOML run configuration.
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the exact phase-bookkeeping tables for all four logical inputs.
    Oracle,
    /// Rank timing integer pairs (n1, n2) by commensuration residual.
    Search {
        /// Scan 1 <= n1, n2 <= bound.
        bound: u32,
        /// Rows of the ranked table to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Evaluate a parameter-sweep grid and write sweep.csv.
    Sweep {
        /// TOML sweep configuration.
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the photon-transfer window bounds for physical inputs.
    Feasibility {
        /// Photon angular frequency (1/s).
        #[arg(long, default_value_t = 1e10)]
        omega: f64,
        /// Frequency uncertainty bound (1/s).
        #[arg(long, default_value_t = 1e9)]
        delta_omega: f64,
        /// Single-excitation Rabi period (s).
        #[arg(long, default_value_t = 1e-6)]
        tau1: f64,
        /// Transfer window to test (s).
        #[arg(long, default_value_t = 1e-9)]
        delta_tau: f64,
        /// Optional JSON report path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> cocsign::Result<()> {
    match cli.command {
        Command::Simulate { config } => {
            let config = RunConfig::from_file(&config)?;
            let result = run_simulate(&config)?;
            println!("{}", result.summary.one_line());
        }
        Command::Oracle => {
            print!("{}", run_oracle()?);
        }
        Command::Search { bound, top } => {
            print!("{}", run_search(bound, top)?);
        }
        Command::Sweep { config } => {
            let config = SweepConfig::from_file(&config)?;
            let (path, rows) = run_sweep(&config)?;
            println!("wrote {rows} rows to {}", path.display());
        }
        Command::Feasibility {
            omega,
            delta_omega,
            tau1,
            delta_tau,
            output,
        } => {
            let inputs = FeasibilityInputs {
                omega,
                delta_omega,
                tau1,
                delta_tau,
            };
            let file = run_feasibility(inputs, output.as_deref())?;
            println!(
                "delta_tau_min={:.3e}s window_ok={} error_floor={:.3e} rwa_ok={}",
                file.report.delta_tau_min,
                file.report.window_ok,
                file.report.single_shot_error_floor,
                file.report.rwa_ok,
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
