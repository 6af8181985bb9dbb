use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nltr::commands;
use nltr::{ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(name = "nltr", version, about = "TR-NEWS simulations of a cracked composite laminate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output run directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Focused {
    #[command(flatten)]
    common: Common,
    /// Focus receiver; repeat for several. Defaults to every receiver.
    #[arg(long)]
    focus: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the mesh and write it with the layer stack.
    Mesh(Common),
    /// Two-pass time-reversal focusing.
    RunTrnews(Focused),
    /// Focusing with the chirp sign flipped, and the pulse-inversion residual.
    RunPi(Focused),
    /// Focusing of a delayed superposition against its linear prediction.
    RunDtr(Focused),
    /// Field snapshots during the second pass (default focus: middle receiver).
    Snapshots(Focused),
    /// Mesh, operator, energy and contact audit.
    Verify(Common),
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let load = |c: &Common| ExperimentConfig::load(&c.config);
    match cli.command {
        Command::Mesh(c) => commands::cmd_mesh(&load(&c)?, &c.out).map(|_| true),
        Command::RunTrnews(f) => commands::cmd_trnews(&load(&f.common)?, &f.common.out, &f.focus).map(|_| true),
        Command::RunPi(f) => commands::cmd_pi(&load(&f.common)?, &f.common.out, &f.focus).map(|_| true),
        Command::RunDtr(f) => commands::cmd_dtr(&load(&f.common)?, &f.common.out, &f.focus).map(|_| true),
        Command::Snapshots(f) => commands::cmd_snapshots(&load(&f.common)?, &f.common.out, &f.focus).map(|_| true),
        Command::Verify(c) => commands::cmd_verify(&load(&c)?, &c.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
