//! Command-line front end for the two-site atom-cavity entanglement library.
//!
//! Grammar: `djc <command> [--config FILE] [KEY=VALUE]...` — settings come
//! from an optional file of `KEY=VALUE` lines overlaid by the trailing
//! arguments (later wins). Exit codes: 0 success, 1 bad input or runtime
//! error, 2 verification failure.

mod config;
mod csvout;
mod figures;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::Settings;
use run::Failure;

#[derive(Parser)]
#[command(
    name = "djc",
    version,
    about = "Entanglement dynamics of two remote atom-cavity systems",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every computing command.
#[derive(Args)]
struct CommonArgs {
    /// File of KEY=VALUE lines ('#' comments allowed) read before the
    /// command-line settings
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// KEY=VALUE settings; later entries override earlier ones and the file
    #[arg(value_name = "KEY=VALUE")]
    settings: Vec<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Target to regenerate (fig3 .. fig13)
    #[arg(value_name = "TARGET")]
    figure: String,
    /// File of KEY=VALUE lines read before the command-line settings
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Only output=PATH is accepted here; everything else is baked in
    #[arg(value_name = "KEY=VALUE")]
    settings: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the amplitude magnitudes of the evolving state as CSV
    Evolve(CommonArgs),
    /// Write all six pairwise concurrences over time as CSV
    Concurrence(CommonArgs),
    /// Report intervals where a pair's concurrence vanishes for a while
    Esd(CommonArgs),
    /// Report times where a pair reaches (near-)unit concurrence
    Transfer(CommonArgs),
    /// Tabulate concurrence extrema and death-window totals over 1-2 axes
    Sweep(CommonArgs),
    /// Regenerate a reference curve from its baked parameter set
    Reproduce(ReproduceArgs),
    /// Run the internal consistency checks and report each one
    Verify,
}

fn settings_from(config: Option<&PathBuf>, tokens: &[String]) -> Result<Settings, Failure> {
    Settings::from_sources(config.map(|p| p.as_path()), tokens).map_err(Failure::Message)
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Evolve(a) => run::evolve(&settings_from(a.config.as_ref(), &a.settings)?),
        Command::Concurrence(a) => run::concurrence(&settings_from(a.config.as_ref(), &a.settings)?),
        Command::Esd(a) => run::esd(&settings_from(a.config.as_ref(), &a.settings)?),
        Command::Transfer(a) => run::transfer(&settings_from(a.config.as_ref(), &a.settings)?),
        Command::Sweep(a) => run::sweep_cmd(&settings_from(a.config.as_ref(), &a.settings)?),
        Command::Reproduce(a) => {
            let s = settings_from(a.config.as_ref(), &a.settings)?;
            figures::reproduce(&a.figure, &s)
        }
        Command::Verify => run::verify(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if informational {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Message(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}
