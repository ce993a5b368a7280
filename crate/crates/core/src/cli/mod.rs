//! Problem files in, reports out.

mod commands;
pub mod parse;
pub mod report;

use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use commands::{run_command, Command};
pub use parse::{parse_entire, parse_poly, parse_problem, render_problem, ParseError, ParseErrorKind, ProblemSpec};
pub use report::{emit_report, Format, RunReport};

use crate::algebra::AlgebraError;
use crate::filtration::FiltrationError;
use crate::gradedgeom::GeomError;
use crate::nevanlinna::NumError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("unsupported format '{0}'")]
    UnsupportedFormat(String),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for malformed input, 3 for failed preconditions, 4 when a numeric
    /// guard trips.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::UnknownCommand(_) | CliError::UnsupportedFormat(_) => 2,
            CliError::Numeric(
                NumError::Overflow { .. }
                | NumError::WindingAmbiguous { .. }
                | NumError::WindingMismatch { .. }
                | NumError::QuadratureFailed,
            ) => 4,
            _ => 3,
        }
    }
}

#[derive(Parser, Debug, Clone, Default)]
#[command(name = "nevlab", about = "Filtrations, admissibility and value-distribution sweeps for moving hypersurfaces")]
pub struct Flags {
    /// hilbert, admissible, filtration, basis, product, tf, zeros, smt or defects
    pub command: String,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "N")]
    pub n_deg: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_steps: Option<usize>,
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Upper bound on angular samples per circle mean.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Admissibility witnesses per subset.
    #[arg(long)]
    pub trials: Option<usize>,
    /// 1-based target for `zeros`.
    #[arg(long)]
    pub target: Option<usize>,
    /// Comma-separated 1-based targets for the filtration commands.
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long, default_value = "text")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Disable the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

/// Reads the problem, runs the command and writes the report. Returns the
/// process exit code.
pub fn run(flags: &Flags) -> i32 {
    match try_run(flags) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(flags: &Flags) -> Result<Vec<String>, CliError> {
    let format: Format = flags.format.parse()?;
    let text = std::fs::read_to_string(&flags.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", flags.input.display())))?;
    let spec = parse_problem(&text)?;
    let report = run_command(&flags.command, &spec, flags)?;
    let out = emit_report(&report, format)?;
    match &flags.out {
        Some(path) => std::fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    Ok(if format == Format::Text { Vec::new() } else { report.warnings })
}
