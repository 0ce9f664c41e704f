//! Library side of the `dulac` command-line tool: configuration, input
//! loading, report assembly and the subcommands themselves.

pub mod commands;
pub mod report;

use std::fmt;
use std::path::{Path, PathBuf};

use dulac_core::equation::{EquationError, PlanarEquation};
use dulac_core::{Coeff, ORDER_CAP};
use serde_json::Value;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_OUT_OF_CLASS: u8 = 2;
pub const EXIT_RESIDUAL: u8 = 3;

/// Largest accepted floating residual for a certified normal form.
pub const FLOAT_RESIDUAL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Backend {
    Exact,
    #[default]
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Pretty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub order: usize,
    pub tol: f64,
    pub backend: Backend,
    pub output: OutputFormat,
    /// Degree for the `𝒫_d` membership check.
    pub degree: Option<usize>,
    /// Explicit `(M, σ)` for the majorant bound.
    pub bound: Option<(f64, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: 16,
            tol: dulac_core::DEFAULT_TOL,
            backend: Backend::Float,
            output: OutputFormat::Json,
            degree: None,
            bound: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(2..=ORDER_CAP).contains(&self.order) {
            return Err(CliError::Usage(format!(
                "--order must lie in 2..={ORDER_CAP}, got {}",
                self.order
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Tolerance handed to the core: exact arithmetic decides zero exactly.
    pub fn core_tol(&self) -> f64 {
        match self.backend {
            Backend::Exact => 0.0,
            Backend::Float => self.tol,
        }
    }

    pub fn residual_threshold(&self) -> f64 {
        match self.backend {
            Backend::Exact => 0.0,
            Backend::Float => FLOAT_RESIDUAL_THRESHOLD,
        }
    }

    pub fn render(&self, v: &Value) -> String {
        match self.output {
            OutputFormat::Json => serde_json::to_string(v),
            OutputFormat::Pretty => serde_json::to_string_pretty(v),
        }
        .expect("reports serialize")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    OutOfClass(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::OutOfClass(_) => EXIT_OUT_OF_CLASS,
            _ => EXIT_USAGE,
        }
    }

    fn parse(file: &Path, message: impl fmt::Display) -> Self {
        CliError::Parse {
            path: file.display().to_string(),
            message: message.to_string(),
        }
    }
}

/// A report and the exit code it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: u8,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Self { report, code: EXIT_OK }
    }
}

pub fn read_json(file: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(file).map_err(|source| CliError::Io {
        path: file.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(file, e))
}

pub fn parse_equation<C: Coeff>(file: &Path, v: &Value) -> Result<PlanarEquation<C>, CliError> {
    PlanarEquation::from_json(v).map_err(|e| match e {
        EquationError::NotSingular => CliError::OutOfClass(format!("{}: {e}", file.display())),
        e => CliError::parse(file, e),
    })
}

pub fn load_equation<C: Coeff>(file: &Path) -> Result<PlanarEquation<C>, CliError> {
    parse_equation(file, &read_json(file)?)
}
