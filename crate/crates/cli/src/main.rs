//! `novikov`: config-driven runs of the solver, the peakon ODE, the norm
//! calculators, the lemma harnesses and the headline experiments.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Experiment, Sink};

#[derive(Parser)]
#[command(name = "novikov", version, about = "Pseudospectral laboratory for the Novikov equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV and JSON reports.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured equation from `datum`.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Also write the trajectory in the binary format.
        #[arg(long)]
        binary: bool,
    },
    /// Integrate the multi-peakon ODE.
    Peakon {
        #[command(flatten)]
        common: Common,
    },
    /// Print Besov, Triebel-Lizorkin and Sobolev norms of `datum`.
    Norms {
        #[command(flatten)]
        common: Common,
    },
    /// Run the randomized inequality harnesses.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Run one of the headline experiments.
    Experiment {
        #[arg(value_enum)]
        which: Experiment,
        #[command(flatten)]
        common: Common,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_ASSERTION: u8 = 2;
const EXIT_BLOWUP: u8 = 3;

fn run(cli: Cli) -> anyhow::Result<bool> {
    let common = match &cli.command {
        Command::Solve { common, .. }
        | Command::Peakon { common }
        | Command::Norms { common }
        | Command::Verify { common }
        | Command::Experiment { common, .. } => common,
    };
    let loaded = config::load(&common.config)?;
    let sink = Sink::new(&common.out, &loaded)?;
    let cfg = &loaded.config;
    match cli.command {
        Command::Solve { binary, .. } => commands::run_solve(cfg, &sink, binary),
        Command::Peakon { .. } => commands::run_peakon(cfg, &sink),
        Command::Norms { .. } => commands::run_norms(cfg, &sink),
        Command::Verify { .. } => commands::run_verify(cfg, &sink),
        Command::Experiment { which, .. } => commands::run_experiment(which, cfg, &sink),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::from(EXIT_ASSERTION)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<novikov_core::Error>() {
                Some(novikov_core::Error::BlowUp { .. }) => ExitCode::from(EXIT_BLOWUP),
                _ => ExitCode::from(EXIT_CONFIG),
            }
        }
    }
}
