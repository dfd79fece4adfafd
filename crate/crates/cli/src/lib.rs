//! Command-line front end over `qcentral-core`.
//!
//! Exit codes: 0 success, 1 domain rejection (invalid state, unitary outside
//! the centralizer, excluded family member is *not* a rejection), 2 input or
//! parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod files;

pub use files::{Encoding, StateFile, UnitarySpecFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] qcentral_core::Error),
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit 2.
    Input(CliError),
    /// Valid input the operation refuses: exit 1.
    Rejected(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Rejected(_) => 1,
        }
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Core(qcentral_core::Error::InvalidState(report)) => {
                Failure::Rejected(format!("invalid state: {report}"))
            }
            other => Failure::Input(other),
        }
    }
}

impl From<qcentral_core::Error> for Failure {
    fn from(e: qcentral_core::Error) -> Self {
        CliError::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(CliError::Io(e.to_string()))
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcentral", version, about = "Pauli-basis states, 1-qubit reductions and their local-unitary centralizers")]
pub struct Cli {
    /// Tolerance override (defaults: 1e-9 for classification and centralizer
    /// membership, 1e-10 for equality checks).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Emit machine-readable JSON-lines records instead of text reports.
    #[arg(long, global = true)]
    pub json: bool,

    /// Encoding for written state files.
    #[arg(long, global = true, value_enum, default_value_t = Encoding::Pauli)]
    pub format: Encoding,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the density-matrix constraints of a state file.
    Validate { state: PathBuf },
    /// Split a state into identity, 1-qubit and correlation parts.
    Decompose {
        state: PathBuf,
        /// Write the weight ≥ 2 part as a Pauli-map file.
        #[arg(long)]
        delta_out: Option<PathBuf>,
    },
    /// Classify the centralizer of the state's 1-qubit reductions.
    Centralizer { state: PathBuf },
    /// Apply a local unitary `U ρ U†`.
    Evolve {
        state: PathBuf,
        spec: PathBuf,
        /// Reject unitaries that move any 1-qubit reduction.
        #[arg(long)]
        require_centralizer: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw members of the state's family from random centralizer elements.
    Sample {
        state: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for `sample-NNNN.json` files; JSON lines on stdout otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare two states' reductions and family invariants.
    Compare { a: PathBuf, b: PathBuf },
    /// Write a fixture state.
    Fixture {
        #[command(subcommand)]
        kind: FixtureKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureKind {
    /// `(|0…0⟩ + |1…1⟩)/√2`.
    Ghz { n: usize },
    /// `(1 − w) 2^{-n} 1 + w GHZ_n`.
    Werner { n: usize, weight: f64 },
    /// `2^{-n} 1`.
    Mixed { n: usize },
    /// Tensor product of single-qubit states, one `--bloch x,y,z` per qubit.
    Product {
        #[arg(long = "bloch", value_parser = parse_triple, required = true)]
        bloch: Vec<[f64; 3]>,
    },
    /// Random full-rank state from a seeded Gaussian factor.
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 3 comma-separated numbers, got {}", v.len()))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = match &f {
                Failure::Input(e) => writeln!(err, "error: {e}"),
                Failure::Rejected(msg) => writeln!(err, "rejected: {msg}"),
            };
            f.exit_code()
        }
    }
}

pub(crate) fn read_state(path: &Path) -> Result<(StateFile, qcentral_core::PauliState), Failure> {
    let file = StateFile::read(path)?;
    let state = file.to_state()?;
    Ok((file, state))
}
