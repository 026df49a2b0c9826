//! `dce`: tables and reports from the cavity simulator.
//!
//! Exit codes: 0 success, 1 a `check` failed, 2 bad configuration,
//! 3 solver or output failure.

mod commands;
mod config;
mod error;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::load;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "dce",
    version,
    about = "Polariton modes and photon creation in a cavity with moving dispersive mirrors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound modes (and optional scattering states) as CSV.
    Modes(Common),
    /// Lowest frequencies and couplings over a log grid of ω_p/ω_c, as CSV.
    Sweep(Common),
    /// Photon numbers over time for a prescribed mirror motion, as CSV.
    Evolve(Common),
    /// Golden-rule leakage rates over a grid of drive frequencies, as CSV.
    Decay(Common),
    /// Polariton versus scaled photon coefficients, as JSON.
    Compare(Common),
    /// Property suite, as JSON; exits 1 if any check fails.
    Check(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for grid commands.
    #[arg(long)]
    threads: Option<usize>,
    /// Override a configuration key, e.g. `--set cavity.omega_p_ratio=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Modes(c)
        | Command::Sweep(c)
        | Command::Evolve(c)
        | Command::Decay(c)
        | Command::Compare(c)
        | Command::Check(c) => c,
    };
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let path = common.config.as_deref();
    let sets = &common.sets;
    // Configuration is validated before the output file is touched.
    match &cli.command {
        Command::Modes(_) => commands::modes(&load(path, sets)?, sink(&common.out)?),
        Command::Sweep(_) => commands::sweep(&load(path, sets)?, sink(&common.out)?),
        Command::Evolve(_) => commands::evolve_cmd(&load(path, sets)?, sink(&common.out)?),
        Command::Decay(_) => commands::decay(&load(path, sets)?, sink(&common.out)?),
        Command::Compare(_) => commands::compare(&load(path, sets)?, sink(&common.out)?),
        Command::Check(_) => commands::check(&load(path, sets)?, sink(&common.out)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dce: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
