//! `kerrcool`: figure sweeps, point solves and drive-power design.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(name = "kerrcool", version, about = "Phonon occupancy of a Kerr-squeezed magnomechanical system")]
struct Cli {
    /// Worker threads for sweeps (defaults to available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Parameter file with [system], [drive] and [sweep] sections.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and write a CSV of occupancies.
    Sweep(Io),
    /// Solve a single operating point and print a report.
    Solve(Io),
    /// Compute the drives and powers that realize a target operating point.
    Design(Io),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let workers = match cli.workers {
        Some(0) => return Err(CliError::Runtime("--workers must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    match cli.command {
        Command::Sweep(io) => {
            let cfg = config::load(&io.config)?;
            commands::cmd_sweep(&cfg, io.out.as_deref(), workers)
        }
        Command::Solve(io) => {
            let cfg = config::load(&io.config)?;
            commands::cmd_solve(&cfg, io.out.as_deref())
        }
        Command::Design(io) => {
            let cfg = config::load(&io.config)?;
            commands::cmd_design(&cfg, io.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
