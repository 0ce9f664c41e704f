use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dulac_cli::commands;
use dulac_cli::{Backend, CliError, Outcome, OutputFormat, RunConfig, EXIT_USAGE};
use dulac_core::par::Execution;

/// Saddle-node classification and Dulac prenormalization of planar
/// equations `A dy = B dx`.
#[derive(Debug, Parser)]
#[command(name = "dulac", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Truncation order N (2..=64).
    #[arg(long, global = true, default_value_t = 16)]
    order: usize,
    /// Zero tolerance for the floating backend.
    #[arg(long, global = true, default_value_t = dulac_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Float)]
    backend: Backend,
    /// Also test membership in the polynomial family of this degree.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Compact JSON output (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Majorant constant M for non-polynomial inputs.
    #[arg(long, global = true, requires = "bound_sigma")]
    bound_m: Option<f64>,
    /// Majorant ratio sigma for non-polynomial inputs.
    #[arg(long, global = true, requires = "bound_m")]
    bound_sigma: Option<f64>,
    /// Process batches on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalue ratio, regime and 𝓔₁ membership.
    Classify { file: PathBuf },
    /// Full Dulac pipeline with residual certification.
    Normalize { file: PathBuf },
    /// Separatrix x = s(y) of the prepared equation.
    Separatrix {
        file: PathBuf,
        /// Cross-check against coefficient matching.
        #[arg(long)]
        oracle: bool,
    },
    /// Factorial norms of an equation or a series.
    Norms { file: PathBuf },
    /// Jet ranks and freedom of a family (JSON array of series).
    Jets {
        file: PathBuf,
        /// Largest jet order; defaults to the smallest order in the family.
        #[arg(long)]
        p: Option<usize>,
    },
    /// Smallest N with the series in M_N.
    Schafke { file: PathBuf },
    /// Least-squares fits on the split compact K⁺ ∪ K⁻.
    DuvalDemo {
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Normalize every *.json file of a directory.
    Batch { dir: PathBuf },
    /// Write seeded random 𝓔₁ equations to a directory.
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            order: self.order,
            tol: self.tol,
            backend: self.backend,
            output: if self.pretty { OutputFormat::Pretty } else { OutputFormat::Json },
            degree: self.degree,
            bound: self.bound_m.zip(self.bound_sigma),
        }
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let exec = cli.global.execution();
    match &cli.command {
        Command::Classify { file } => commands::classify_file(file, cfg),
        Command::Normalize { file } => commands::normalize_file(file, cfg),
        Command::Separatrix { file, oracle } => commands::separatrix_file(file, cfg, *oracle),
        Command::Norms { file } => commands::norms_file(file, cfg),
        Command::Jets { file, p } => commands::jets_file(file, *p, cfg),
        Command::Schafke { file } => commands::schafke_file(file, cfg),
        Command::DuvalDemo { eps, degrees, samples } => commands::duval_demo(*eps, degrees, *samples, exec),
        Command::Batch { dir } => commands::batch_dir(dir, cfg, exec),
        Command::GenCorpus { out, seed, count } => {
            commands::gen_corpus(out, *seed, *count, cli.global.degree.unwrap_or(4), cfg.order)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let cfg = cli.global.config();
    match run(&cli, &cfg) {
        Ok(outcome) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", cfg.render(&outcome.report));
            if outcome.code != 0 {
                if let Some(msg) = outcome.report["diagnostics"]["error"].as_str() {
                    eprintln!("error: {msg}");
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
