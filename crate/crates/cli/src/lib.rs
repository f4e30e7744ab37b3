//! Experiment runner behind the `pareto-forge` binary.
//!
//! * `run` performs one seeded run and writes its archive, decisions, trace
//!   and full result.
//! * `compare` performs `runs` seeded runs per algorithm and writes per-run
//!   metrics plus a mean/std summary.
//! * `front` exports a sample of a benchmark's true Pareto front.
//!
//! Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage or
//! configuration error.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pareto_forge::engine::{run_nsga2, run_sslpsa, RunResult};
use pareto_forge::metrics::{self, MetricReport};
use pareto_forge::{Algorithm, ObjectiveVector, ProblemId, ProblemSpec, XiMode};
use rayon::prelude::*;

use config::{ConfigFile, Experiment};
use output::MetricRow;

pub const THREADS_ENV: &str = "PARETO_FORGE_THREADS";
pub const REFERENCE_POINTS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<pareto_forge::Error> for CliError {
    fn from(e: pareto_forge::Error) -> Self {
        match e {
            pareto_forge::Error::InvalidParameter { .. } | pareto_forge::Error::UnknownProblem(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "pareto-forge", version, about = "Run SSLPSA and NSGA-II on standard bi-objective benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One seeded run.
    Run(ExperimentArgs),
    /// Seeded multi-run comparison with quality metrics.
    Compare(ExperimentArgs),
    /// Export a sample of the true Pareto front as CSV.
    Front(FrontArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    problem: Option<ProblemId>,
    /// `sslpsa` or `nsga2`; `compare` runs both when omitted.
    #[arg(long)]
    algo: Option<Algorithm>,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    xi: Option<f64>,
    /// `fixed` or `uniform`.
    #[arg(long)]
    xi_mode: Option<XiMode>,
    #[arg(long)]
    pmut: Option<f64>,
    #[arg(long)]
    pool: Option<usize>,
    /// SOM units in each phase's center.
    #[arg(long)]
    som_units: Option<usize>,
    #[arg(long)]
    archive_cap: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat JSON file with the same keys as result.json's `config`.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ExperimentArgs {
    fn experiment(self) -> Result<Experiment, CliError> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            problem: self.problem,
            algorithm: self.algo,
            seed: self.seed,
            runs: self.runs,
            generations: self.generations,
            pop_size: self.pop,
            xi: self.xi,
            xi_mode: self.xi_mode,
            p_mut: self.pmut,
            pool_size: self.pool,
            som_units: self.som_units,
            archive_cap: self.archive_cap,
            out: self.out,
        };
        Experiment::resolve(flags.or(file))
    }
}

#[derive(Debug, Args)]
struct FrontArgs {
    #[arg(long)]
    problem: ProblemId,
    /// Number of points.
    #[arg(short, long = "points", default_value_t = REFERENCE_POINTS)]
    k: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (including the program name), executes the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => args.experiment().and_then(|e| cmd_run(&e)),
        Command::Compare(args) => args.experiment().and_then(|e| cmd_compare(&e)),
        Command::Front(args) => cmd_front(args.problem, args.k, args.out.as_deref()),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Executes one run of `algorithm` with the experiment's parameters.
pub fn execute(e: &Experiment, algorithm: Algorithm, seed: u64) -> Result<RunResult, CliError> {
    let problem = ProblemSpec::new(e.problem);
    let result = match algorithm {
        Algorithm::Sslpsa => run_sslpsa(&problem, &e.sslpsa_params(), seed)?,
        Algorithm::Nsga2 => run_nsga2(&problem, &e.nsga2_params(), seed)?,
    };
    Ok(result)
}

pub fn cmd_run(e: &Experiment) -> Result<(), CliError> {
    let algorithm = e.algorithm.unwrap_or(Algorithm::Sslpsa);
    let result = execute(e, algorithm, e.base_seed)?;
    output::write_run(&e.out, &result, &e.to_config(Some(algorithm), Some(e.base_seed)))?;
    println!(
        "{} on {} (seed {}): {} archive members in {:.3}s, written to {}",
        algorithm,
        e.problem,
        e.base_seed,
        result.archive_members.len(),
        result.wall_time,
        e.out.display()
    );
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| CliError::Runtime(e.to_string()))
}

/// Metrics of one run against `reference`. Δ and SPREAD are NaN for an
/// archive with fewer than two members.
pub fn metric_row(
    e: &Experiment,
    run: usize,
    result: &RunResult,
    reference: &[ObjectiveVector],
) -> Result<MetricRow, CliError> {
    let front: Vec<ObjectiveVector> = result.archive_members.iter().map(|s| s.objectives.clone()).collect();
    let pairwise = |f: fn(&[ObjectiveVector], &[ObjectiveVector]) -> pareto_forge::Result<f64>| {
        if front.len() < 2 {
            Ok(f64::NAN)
        } else {
            f(&front, reference)
        }
    };
    Ok(MetricRow {
        problem: e.problem.to_string(),
        algorithm: result.algorithm.to_string(),
        run,
        seed: result.seed,
        gamma: metrics::gamma(&front, reference)?,
        delta: pairwise(metrics::delta)?,
        igd: metrics::igd(&front, reference)?,
        spread: pairwise(metrics::spread)?,
        archive_size: front.len(),
        wall_time: result.wall_time,
    })
}

/// Runs every requested algorithm `runs` times and returns the metric rows
/// ordered by algorithm, then run index.
pub fn compare_rows(e: &Experiment) -> Result<Vec<MetricRow>, CliError> {
    let reference = ProblemSpec::new(e.problem).true_front_sample(REFERENCE_POINTS)?;
    let algorithms: Vec<Algorithm> = match e.algorithm {
        Some(a) => vec![a],
        None => Algorithm::ALL.to_vec(),
    };
    let jobs: Vec<(Algorithm, usize)> = algorithms
        .iter()
        .flat_map(|&a| (0..e.runs).map(move |i| (a, i)))
        .collect();
    let pool = thread_pool()?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(algorithm, run)| {
                let result = execute(e, algorithm, e.base_seed + run as u64)?;
                metric_row(e, run, &result, &reference)
            })
            .collect()
    })
}

pub fn cmd_compare(e: &Experiment) -> Result<(), CliError> {
    let rows = compare_rows(e)?;
    fs::create_dir_all(&e.out)?;
    output::write_metrics(&e.out.join("metrics.csv"), &rows)?;

    let mut reports = Vec::new();
    for algorithm in Algorithm::ALL {
        let runs: Vec<_> = rows
            .iter()
            .filter(|r| r.algorithm == algorithm.as_str())
            .map(MetricRow::metrics)
            .collect();
        if runs.is_empty() {
            continue;
        }
        reports.push(MetricReport::from_runs(e.problem.as_str(), algorithm.as_str(), &runs)?);
    }
    output::write_summary(&e.out.join("summary.csv"), &reports)?;
    fs::write(
        e.out.join("config.json"),
        serde_json::to_string_pretty(&e.to_config(None, None)).map_err(io::Error::from)? + "\n",
    )?;

    for r in &reports {
        println!(
            "{:<7} {:<5} runs={:<3} gamma={:.4e}±{:.2e} delta={:.4}±{:.4} igd={:.4e} spread={:.4}",
            r.algorithm, r.problem, r.runs, r.gamma.mean, r.gamma.std, r.delta.mean, r.delta.std, r.igd.mean, r.spread.mean
        );
    }
    Ok(())
}

pub fn cmd_front(problem: ProblemId, k: usize, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let points = ProblemSpec::new(problem)
        .true_front_sample(k)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            output::write_points(File::create(path)?, &points)?
        }
        None => output::write_points(io::stdout().lock(), &points)?,
    }
    Ok(())
}
