//! Batch front end. Each invocation runs one command and writes one report.

mod commands;
pub mod config;
pub mod output;
mod selftest;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use commands::run;
pub use config::{CommandName, Format, JobConfig, RawConfig};
pub use output::{render, Provenance, Report, ARTIFACT_VERSION};

#[derive(Debug, Parser)]
#[command(name = "fock-toeplitz", version, about = "High-precision lab for Fock-space Toeplitz operators")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RawConfig,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Moment matrices (Gram, weighted, Fock-Toeplitz)
    Moments,
    /// Outbedding pencil spectra, δ/Δ estimates and midrange counts
    Outbed,
    /// Orthonormal polynomials of the support and their n-th roots
    Orthopoly,
    /// Certified Toeplitz truncation spectra along a degree ladder
    ToeplitzSpectrum,
    /// Slope fits and counting laws on a saved spectrum
    Asymfit,
    /// Capacity brackets and the separation witness
    Capacity,
    /// Landau-cluster count bounds
    LandauReport,
    /// Closed-form sanity checks
    Selftest,
}

impl From<Command> for CommandName {
    fn from(c: Command) -> Self {
        match c {
            Command::Moments => CommandName::Moments,
            Command::Outbed => CommandName::Outbed,
            Command::Orthopoly => CommandName::Orthopoly,
            Command::ToeplitzSpectrum => CommandName::ToeplitzSpectrum,
            Command::Asymfit => CommandName::Asymfit,
            Command::Capacity => CommandName::Capacity,
            Command::LandauReport => CommandName::LandauReport,
            Command::Selftest => CommandName::Selftest,
        }
    }
}

/// Parses, runs and emits; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = JobConfig::from_raw(cli.command.into(), cli.config)
        .and_then(|job| run(&job).and_then(|report| output::emit(&report, &job).map(|()| report.status)));
    match outcome {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
