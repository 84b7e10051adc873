//! `ncosc`: energies, f table, ω_c sweeps, verification reports and symbolic
//! dumps for the noncommutative charged oscillator.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ncosc_core::Error;

use config::{resolve, Common};

#[derive(Parser, Debug)]
#[command(name = "ncosc", version, about = "Noncommutative phase-space charged oscillator toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unperturbed energies and first-order corrections from the closed forms
    Energies {
        /// Also diagonalize the full Hamiltonian and write its spectrum here
        #[arg(long)]
        dump_spectrum: Option<PathBuf>,
    },
    /// Table of f(n_rho, |mu|) up to --nrho (default 3)
    Ftable {
        /// Include |mu| = n_rho
        #[arg(long)]
        diagonal: bool,
    },
    /// Relative correction against omega_c for one state
    Sweep,
    /// Cross-check closed forms, oracle and exact slopes; writes ledger.txt and report.csv into --out
    Verify {
        /// Published claims, one `label: expression` per line
        #[arg(long)]
        claims: Option<PathBuf>,
    },
    /// Symbolic theta/eta buckets of the Bopp-shifted Hamiltonian
    Expand,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::Inaccurate { .. } | Error::NotHermitian(_) | Error::Tracking(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (cfg, file) = resolve(&cli.common)?;
    let text = match cli.command {
        Command::Energies { dump_spectrum } => commands::energies(&cfg, dump_spectrum.as_deref())?,
        Command::Ftable { diagonal } => {
            let n = cli.common.nrho.or_else(|| file.get("nrho").and_then(|v| v.parse().ok())).unwrap_or(3);
            commands::ftable(&cfg, n, diagonal)?
        }
        Command::Sweep => commands::sweep(&cfg)?,
        Command::Verify { claims } => {
            let claims = claims.or_else(|| file.get("claims").map(PathBuf::from));
            let v = commands::verify(&cfg, claims.as_deref())?;
            print!("{}", v.text);
            return Ok(v.consistent);
        }
        Command::Expand => commands::expand(&cfg)?,
    };
    commands::emit(&cfg.out, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ncosc: internal consistency checks failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("ncosc: {e}");
            ExitCode::from(e.code())
        }
    }
}
