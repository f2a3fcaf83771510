//! Command-line front end: synthesis, ranking and tuning, response heatmaps,
//! expected-time tables, and CME scaling probes, each emitting plot-ready CSV
//! or JSON plus a run manifest.

pub mod commands;
pub mod manifest;

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::ctmc::CtmcError;
use crate::oracle::OracleError;
use crate::predicate::PredicateError;
use crate::specs::SpecError;
use crate::synthesis::SynthesisError;
use crate::tuner::TunerError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl CliFailure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<CtmcError> for CliFailure {
    fn from(e: CtmcError) -> Self {
        match e {
            CtmcError::Numerical(_) => CliFailure::numerical(e.to_string()),
            other => CliFailure::usage(other.to_string()),
        }
    }
}

impl From<TunerError> for CliFailure {
    fn from(e: TunerError) -> Self {
        match e {
            TunerError::Ctmc(inner) => inner.into(),
            other => CliFailure::usage(other.to_string()),
        }
    }
}

impl From<SynthesisError> for CliFailure {
    fn from(e: SynthesisError) -> Self {
        CliFailure::usage(e.to_string())
    }
}

impl From<OracleError> for CliFailure {
    fn from(e: OracleError) -> Self {
        CliFailure::usage(e.to_string())
    }
}

impl From<SpecError> for CliFailure {
    fn from(e: SpecError) -> Self {
        CliFailure::usage(e.to_string())
    }
}

impl From<PredicateError> for CliFailure {
    fn from(e: PredicateError) -> Self {
        CliFailure::usage(e.to_string())
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure::usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "crnsynth",
    version,
    about = "Synthesize, tune, and analyze bimolecular reaction networks"
)]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate networks satisfying a specification.
    Synth(SynthArgs),
    /// Enumerate at increasing path-length bounds and tabulate solution counts.
    SweepK(SweepArgs),
    /// Rank candidate networks and tune their rates.
    Tune(TuneArgs),
    /// Per-input correctness probabilities for a network.
    Heatmap(HeatmapArgs),
    /// Expected termination times over a range of molecule totals.
    Hitting(HittingArgs),
    /// Transient-solution timing over a range of molecule totals.
    CmeBench(CmeBenchArgs),
    /// Brute-force satisfying set at tiny bounds (ground truth).
    Oracle(OracleArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SpecSelector {
    /// Specification: `am`, `div`, or a path to a spec JSON file.
    #[arg(long)]
    pub spec: String,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    pub spec: SpecSelector,
    /// Number of species (N).
    #[arg(long)]
    pub species: usize,
    /// Number of reactions (M).
    #[arg(long)]
    pub reactions: usize,
    /// Path-length bound (K).
    #[arg(long)]
    pub steps: usize,
    /// Use single-firing steps instead of stutter transitions.
    #[arg(long)]
    pub no_stutter: bool,
    /// Stop after this many solutions.
    #[arg(long)]
    pub max_solutions: Option<usize>,
    /// Solver timeout in seconds.
    #[arg(long, default_value_t = 7200)]
    pub timeout: u64,
    /// Dump the SMT-LIB script of every solver round into this directory.
    #[arg(long)]
    pub dump_smt: Option<PathBuf>,
    /// Solver backend.
    #[arg(long, default_value = "builtin", value_parser = ["exec", "builtin"])]
    pub backend: String,
    /// External solver command line (for `--backend exec`), e.g. "z3 -in".
    #[arg(long, default_value = "z3 -in")]
    pub solver_cmd: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecSelector,
    #[arg(long)]
    pub species: usize,
    #[arg(long)]
    pub reactions: usize,
    /// Smallest path-length bound.
    #[arg(long)]
    pub steps: usize,
    /// Largest path-length bound.
    #[arg(long)]
    pub max_steps: usize,
    #[arg(long)]
    pub no_stutter: bool,
    #[arg(long, default_value_t = 7200)]
    pub timeout: u64,
    #[arg(long, default_value = "builtin", value_parser = ["exec", "builtin"])]
    pub backend: String,
    #[arg(long, default_value = "z3 -in")]
    pub solver_cmd: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// Candidate network(s): a CRN JSON file or a synthesis output file.
    #[arg(long)]
    pub crn: PathBuf,
    #[command(flatten)]
    pub spec: SpecSelector,
    #[arg(long, default_value_t = 20)]
    pub burnin: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 100.0)]
    pub tfinal: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// How many top candidates get the long schedule.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long)]
    pub long_burnin: Option<usize>,
    #[arg(long)]
    pub long_samples: Option<usize>,
    /// Short-objective threshold a candidate must clear for the long schedule.
    #[arg(long, default_value_t = 0.5)]
    pub gate: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct HeatmapArgs {
    /// Network JSON file; its rate constants are used as-is.
    #[arg(long)]
    pub crn: PathBuf,
    #[command(flatten)]
    pub spec: SpecSelector,
    #[arg(long, default_value_t = 100.0)]
    pub tfinal: f64,
    /// Count only terminal goal states.
    #[arg(long)]
    pub terminal_only: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct HittingArgs {
    #[arg(long)]
    pub crn: PathBuf,
    /// Initial fractions of the first species, e.g. 0.1,0.6,0.9.
    #[arg(long, default_value = "0.1,0.6,0.9")]
    pub fractions: String,
    /// Molecule totals, as an inclusive range LO..HI.
    #[arg(long)]
    pub n_range: String,
    /// Step between totals.
    #[arg(long, default_value_t = 1)]
    pub n_step: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CmeBenchArgs {
    #[arg(long)]
    pub crn: PathBuf,
    /// Comma-separated molecule totals, e.g. 10,20,50,100.
    #[arg(long)]
    pub n_list: String,
    /// Output points across the integration interval.
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Also write per-state transient probabilities (transient_n<k>.csv).
    #[arg(long)]
    pub dump_transient: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub spec: SpecSelector,
    #[arg(long)]
    pub species: usize,
    #[arg(long)]
    pub reactions: usize,
    #[arg(long)]
    pub steps: usize,
    /// Drop grid pairs whose molecule total exceeds this bound.
    #[arg(long)]
    pub max_total: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Manifest file written by a previous run.
    pub manifest: PathBuf,
    /// Redirect outputs to this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    run_with_args(args)
}

/// Parses and executes; returns the process exit code.
pub fn run_with_args(args: Vec<String>) -> i32 {
    let full: Vec<String> = std::iter::once("crnsynth".to_string())
        .chain(args.iter().cloned())
        .collect();
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(jobs) = cli.jobs {
        // First initialization wins; later calls in the same process keep the
        // existing pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = match cli.command {
        Command::Synth(cmd) => commands::synth(&cmd, &args),
        Command::SweepK(cmd) => commands::sweep_k(&cmd, &args),
        Command::Tune(cmd) => commands::tune(&cmd, &args),
        Command::Heatmap(cmd) => commands::heatmap(&cmd, &args),
        Command::Hitting(cmd) => commands::hitting(&cmd, &args),
        Command::CmeBench(cmd) => commands::cme_bench(&cmd, &args),
        Command::Oracle(cmd) => commands::oracle(&cmd, &args),
        Command::Replay(cmd) => commands::replay(&cmd),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

pub(crate) fn backend_from_flags(
    backend: &str,
    solver_cmd: &str,
    timeout_secs: u64,
) -> Result<crate::synthesis::SolverBackend, CliFailure> {
    let timeout = Duration::from_secs(timeout_secs);
    match backend {
        "builtin" => Ok(crate::synthesis::SolverBackend::Builtin { timeout }),
        "exec" => {
            let mut parts = solver_cmd.split_whitespace();
            let command = parts
                .next()
                .ok_or_else(|| CliFailure::usage("empty --solver-cmd"))?
                .to_string();
            Ok(crate::synthesis::SolverBackend::External {
                command,
                args: parts.map(str::to_string).collect(),
                timeout,
            })
        }
        other => Err(CliFailure::usage(format!("unknown backend `{other}`"))),
    }
}
