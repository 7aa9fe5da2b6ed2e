//! Command-line front end: body files in, reports and CSV out.
//!
//! Exit codes: 0 success, 1 a checked assertion failed, 2 unreadable or
//! invalid input, 3 pivot on the boundary, 4 command needs a planar body.

use std::io::Write;
use std::path::{Path, PathBuf};

use chords::{Body, Error, Point, Tolerance};
use clap::{Parser, ValueEnum};

mod commands;
mod transcript;

pub use commands::{analyze, philo, polytope_audit, sweep_csv};
pub use transcript::examples;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Analyze,
    Sweep,
    Philo,
    Examples,
    PolytopeAudit,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "chords", version, about = "Extremal chords of convex bodies through a fixed point")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Body description (JSON).
    #[arg(long)]
    pub body: Option<PathBuf>,
    /// Pivot coordinates, comma separated.
    #[arg(long, value_parser = parse_pivot, allow_hyphen_values = true)]
    pub pivot: Option<Pivot>,
    /// Sweep samples, or the refinement grid of a planar analysis.
    #[arg(long, default_value_t = 1024, value_parser = parse_grid)]
    pub grid: usize,
    /// Starting directions per kind for searches in dimension three and up.
    #[arg(long, default_value_t = 64)]
    pub multistart: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Far pivots drawn by polytope-audit.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
    pub tol: f64,
}

/// Pivot coordinates as given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct Pivot(pub Vec<f64>);

fn parse_pivot(s: &str) -> Result<Pivot, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate {t:?}: {e}"))).collect::<Result<_, _>>().map(Pivot)
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 16 {
        return Err("grid must be at least 16".into());
    }
    Ok(n)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(t > 0.0 && t.is_finite()) {
        return Err("tolerance must be positive".into());
    }
    Ok(t)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("pivot lies on the boundary of the body")]
    BoundaryPivot,
    #[error("{0} needs a planar body")]
    NotPlanar(&'static str),
    #[error("writing output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::BoundaryPivot => 3,
            CliError::NotPlanar(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundaryPivot => CliError::BoundaryPivot,
            other => CliError::Input(other.to_string()),
        }
    }
}

/// A finished command: its text and whether every check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

impl RunConfig {
    pub fn tolerance(&self) -> Tolerance {
        Tolerance { eps: self.tol }
    }

    pub fn load_body(&self) -> Result<Body, CliError> {
        let path = self.body.as_ref().ok_or_else(|| CliError::Input("--body is required".into()))?;
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Body::from_json(&text)?)
    }

    pub fn load_pivot(&self, dim: usize) -> Result<Point, CliError> {
        let p = self.pivot.as_ref().ok_or_else(|| CliError::Input("--pivot is required".into()))?;
        if p.0.len() != dim {
            return Err(CliError::Input(format!("pivot has {} coordinates, body has dimension {dim}", p.0.len())));
        }
        Ok(chords::point(&p.0))
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Analyze => analyze(cfg),
        Command::Sweep => sweep_csv(cfg),
        Command::Philo => philo(cfg),
        Command::Examples => examples(cfg),
        Command::PolytopeAudit => polytope_audit(cfg),
    }
}

/// Writes through a temporary file in the target directory, then renames it,
/// so a failed run never leaves a partial file behind.
pub fn write_atomically(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn main_with(cfg: &RunConfig) -> i32 {
    match run(cfg) {
        Ok(outcome) => {
            let written = match &cfg.out {
                Some(path) => write_atomically(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.exit_code(),
                Err(e) => {
                    eprintln!("chords: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("chords: {e}");
            e.exit_code()
        }
    }
}
