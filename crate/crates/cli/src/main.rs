use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kmiter_cli::commands::{cmd_check, cmd_equivalence, cmd_forward, cmd_reconstruct};

/// Iterative regularization of ill-posed PDE reconstruction problems
/// (elliptic Cauchy, hyperbolic Dirichlet, backward heat) on a rectangle.
///
/// Exit codes: 0 ok, 2 config/usage error, 3 solver error, 4 parameter
/// bound violated, 5 diagnostic flag raised.
#[derive(Parser)]
#[command(name = "kmiter", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the forward (well-posed direction) solution at a time t
    /// and dump the grid.
    Forward {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Evaluation time.
        #[arg(long)]
        t: f64,
        /// Output grid file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the reconstruction iteration with checkpoints; write report.csv,
    /// reconstruction.grid and error.grid.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Also dump the error field at every checkpoint.
        #[arg(long)]
        dump_checkpoints: bool,
    },
    /// Print operator diagnostics, resonance margins and gamma bounds.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the literal sub-solve path against the closed form at the
    /// given step counts (each at most 1000).
    Equivalence {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated step counts, e.g. --k 1,5,37.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Forward { config, t, out } => cmd_forward(&config, t, &out),
        Command::Reconstruct {
            config,
            out,
            dump_checkpoints,
        } => cmd_reconstruct(&config, &out, dump_checkpoints),
        Command::Check { config } => cmd_check(&config),
        Command::Equivalence { config, k } => cmd_equivalence(&config, &k),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code as u8)
        }
    }
}
