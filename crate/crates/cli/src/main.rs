//! `dkg`: batch front-end for simulations, norm computations and estimate
//! verification sweeps.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 blow-up, 3 a
//! verification check failed.

mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use manifest::Command;

#[derive(Debug, Parser)]
#[command(name = "dkg", version, about = "Dirac–Klein–Gordon numerical laboratory")]
pub struct Cli {
    /// Subcommand to run; must match the manifest's `command`.
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Seed overriding the manifest's.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory overriding the manifest's (default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run estimate checks even when their hypotheses fail.
    #[arg(long)]
    pub override_hypotheses: bool,
    /// The `ε` in exponents such as `b = 1/r + ε`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `region` without a manifest: the exponent `r`.
    #[arg(long)]
    pub r: Option<String>,
    /// `region` without a manifest: the offset `δ`.
    #[arg(long)]
    pub delta: Option<String>,
    /// `region` without a manifest: `minimal_s` or `minimal_l`.
    #[arg(long)]
    pub variant: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    BlowUp(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::BlowUp(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::BlowUp(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<dkg_core::Error> for Failure {
    fn from(e: dkg_core::Error) -> Self {
        match e {
            dkg_core::Error::BlowUp { .. } => Failure::BlowUp(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dkg: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
