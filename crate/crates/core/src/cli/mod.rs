//! Command-line front end: reads a JSON job file, runs one analysis and
//! prints a plain-text report, optionally writing the same report as JSON.

mod commands;
mod spec;

pub use commands::{
    run_command, BoundCheck, ClassSizes, GroupSummary, IrrepInfo, Report, ReportBody, SplitSummary, VerifiedState,
    VerifyConfiguration, VerifySummary, REPORT_SCHEMA,
};
pub use spec::{
    parse_spec, parse_spec_str, parse_word, ClassSpec, ComplexValue, FrameSpec, IrrepSelection, JobSpec, Options,
    RawSpec, SeedBlock, SpinValue, SCHEMA,
};

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::pigroup::PiGroupError;
use crate::reptheory::RepError;
use crate::spinstats::SpinError;
use crate::tunneling::TunnelingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Group orders, case, cosets and class sizes.
    Group,
    /// Predicted splitting multiplicities.
    Split,
    /// Tunneling spectrum, clusters and residuals.
    Spectrum,
    /// Nuclear-spin statistical weights.
    Weights,
    /// Build and check the S+ and S- states.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Group => "group",
            Command::Split => "split",
            Command::Spectrum => "spectrum",
            Command::Weights => "weights",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nrmsym", version, about = "Symmetry analysis of non-rigid molecules")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Job specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Seed for random tunneling blocks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Level clustering tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Count single-nucleus classes in the spin space.
    #[arg(long, action = clap::ArgAction::Set)]
    pub include_spectator_spins: Option<bool>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<PiGroupError> for CliError {
    fn from(e: PiGroupError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::UnknownLabel(_)
            | RepError::DuplicateLabel(_)
            | RepError::CharacterRowNotFound
            | RepError::TooLarge { .. }
            | RepError::GroupMismatch(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<TunnelingError> for CliError {
    fn from(e: TunnelingError) -> Self {
        match e {
            TunnelingError::Rep(inner) => inner.into(),
            TunnelingError::Linalg(inner) => inner.into(),
            TunnelingError::InvalidSeed(_) | TunnelingError::IrrepGroupMismatch => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        match e {
            SpinError::PiGroup(inner) => inner.into(),
            SpinError::Rep(inner) => inner.into(),
            SpinError::Tunneling(inner) => inner.into(),
            SpinError::Linalg(inner) => inner.into(),
            SpinError::TooLarge { .. }
            | SpinError::InvalidLevel(_)
            | SpinError::Mismatch(_)
            | SpinError::UnsupportedCase => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Text and JSON renderings of one run.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub json: String,
}

/// Parses the spec, applies command-line overrides and runs the command.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut job = parse_spec(&cli.spec)?;
    if let Some(seed) = cli.seed {
        job.options.seed = Some(seed);
    }
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
        job.options.cluster_tol = Some(tol);
    }
    if let Some(flag) = cli.include_spectator_spins {
        job.options.include_spectator_spins = flag;
    }
    let report = run_command(cli.command, &job)?;
    let json = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    if let Some(path) = &cli.json {
        std::fs::write(path, &json)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Output {
        text: report.render(),
        json,
    })
}
