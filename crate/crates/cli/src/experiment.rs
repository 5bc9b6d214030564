//! Seeded experiment execution and CSV trace output.
//!
//! Jobs (one per instance seed and algorithm) run on a bounded worker pool;
//! every worker owns its trace and all randomness flows from the config seeds,
//! so reruns of the same config produce byte-identical CSVs (unless wall-clock
//! timing is switched on). Aggregation into per-iteration means across seeds is
//! a single-threaded reduce after all workers finish.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use saddle_core::baselines::{theoretical_pair, tuned_pair, TUNE_GRID};
use saddle_core::framework::{
    run_alternating, run_simultaneous, CbaLearner, RmLearner, RunConfig, RunTrace, SaddleObjective,
};
use saddle_core::problems::{
    dro_synthetic, garnet, load_sparse_classification, matrix_game_random, DroLogistic,
};
use saddle_core::regret::{CbaVariant, WeightSchedule};

use crate::config::{AlgorithmSpec, ConfigError, ExperimentConfig, ProblemSpec};

/// Probe length per grid point when tuning step sizes.
pub const TUNE_PROBE_ITERATIONS: usize = 10;

/// Top-level runner failure: either a bad config or a numerical error.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Solver(saddle_core::CoreError),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Solver(e) => write!(f, "solver error: {e}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<saddle_core::CoreError> for RunError {
    fn from(e: saddle_core::CoreError) -> Self {
        RunError::Solver(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Builds the problem instance for one seed.
pub fn build_problem(
    spec: &ProblemSpec,
    seed: u64,
) -> Result<Box<dyn SaddleObjective>, RunError> {
    Ok(match spec {
        ProblemSpec::MatrixGame { rows, cols, dist } => {
            Box::new(matrix_game_random(*rows, *cols, *dist, seed))
        }
        ProblemSpec::DroSynthetic {
            features,
            samples,
            dist,
            flip_fraction,
        } => Box::new(dro_synthetic(
            *features,
            *samples,
            *dist,
            *flip_fraction,
            seed,
        )?),
        ProblemSpec::DroDataset { path, features } => {
            let ds = load_sparse_classification(path, *features)?;
            Box::new(DroLogistic::with_default_params(ds.features, ds.labels)?)
        }
        ProblemSpec::GarnetMdp {
            states,
            actions,
            branching,
            discount,
            reward_max,
        } => Box::new(garnet(
            *states,
            *actions,
            *branching,
            *reward_max,
            *discount,
            seed,
        )?),
    })
}

/// Result of one (seed, algorithm) job, before serialization.
pub struct JobOutput {
    pub run_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub metric_name: &'static str,
    /// (iteration, elapsed, value) rows, with any probe offsets applied.
    pub rows: Vec<(usize, f64, f64)>,
}

/// Runs one algorithm on one problem instance.
pub fn run_algorithm(
    problem: &dyn SaddleObjective,
    algorithm: AlgorithmSpec,
    cfg: &ExperimentConfig,
) -> Result<(RunTrace, usize, f64), RunError> {
    let base = RunConfig {
        iterations: cfg.iterations,
        schedule: WeightSchedule::uniform(),
        metric_cadence: cfg.metric_cadence,
        timing: cfg.timing,
        time_budget: cfg.time_budget_seconds,
    };
    let trace = match algorithm {
        AlgorithmSpec::SpCbaPlus => {
            let schedule = WeightSchedule::linear_decisions();
            let mut lx =
                CbaLearner::new(problem.domain_x().clone(), CbaVariant::CbaPlus, schedule);
            let mut ly =
                CbaLearner::new(problem.domain_y().clone(), CbaVariant::CbaPlus, schedule);
            let run = RunConfig { schedule, ..base };
            return Ok((run_alternating(problem, &mut lx, &mut ly, &run)?, 0, 0.0));
        }
        AlgorithmSpec::CbaUniform => {
            let schedule = WeightSchedule::uniform();
            let mut lx = CbaLearner::new(problem.domain_x().clone(), CbaVariant::Cba, schedule);
            let mut ly = CbaLearner::new(problem.domain_y().clone(), CbaVariant::Cba, schedule);
            run_simultaneous(problem, &mut lx, &mut ly, &base)?
        }
        AlgorithmSpec::RmPlus => {
            let schedule = WeightSchedule::linear_decisions();
            let mut lx = RmLearner::new(problem.domain_x().external_dim(), true);
            let mut ly = RmLearner::new(problem.domain_y().external_dim(), true);
            let run = RunConfig { schedule, ..base };
            run_alternating(problem, &mut lx, &mut ly, &run)?
        }
        AlgorithmSpec::Baseline { method, tuned } => {
            if tuned {
                let (outcome, (mut lx, mut ly)) =
                    tuned_pair(problem, method, TUNE_PROBE_ITERATIONS, &TUNE_GRID)?;
                // Probe cost is charged to the reported iteration/time budget.
                let main_iters = cfg.iterations.saturating_sub(outcome.probe_iterations);
                let run = RunConfig {
                    iterations: main_iters.max(1),
                    ..base
                };
                let trace = run_simultaneous(problem, &mut lx, &mut ly, &run)?;
                return Ok((trace, outcome.probe_iterations, outcome.probe_seconds));
            }
            let (mut lx, mut ly) = theoretical_pair(problem, method, cfg.iterations)?;
            run_simultaneous(problem, &mut lx, &mut ly, &base)?
        }
    };
    Ok((trace, 0, 0.0))
}

fn run_job(
    cfg: &ExperimentConfig,
    seed: u64,
    algorithm: AlgorithmSpec,
) -> Result<JobOutput, RunError> {
    let problem = build_problem(&cfg.problem, seed)?;
    let (trace, iter_offset, time_offset) = run_algorithm(problem.as_ref(), algorithm, cfg)?;
    let metric_name = trace.metric_kind.name();
    let rows = trace
        .metrics
        .iter()
        .map(|m| {
            (
                m.t + iter_offset,
                if cfg.timing { m.elapsed + time_offset } else { 0.0 },
                m.value,
            )
        })
        .collect();
    Ok(JobOutput {
        run_id: format!(
            "{}-s{}-{}",
            cfg.problem.family_name(),
            seed,
            algorithm.name()
        ),
        algorithm: algorithm.name(),
        seed,
        metric_name,
        rows,
    })
}

/// Formats a float with 17 significant digits, locale-independent.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// The exact per-run CSV header.
pub const CSV_HEADER: &str = "run_id,algorithm,seed,iteration,elapsed_seconds,metric,value";

fn job_to_csv(job: &JobOutput) -> String {
    let mut out = String::with_capacity(64 * (job.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (iteration, elapsed, value) in &job.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            job.run_id,
            job.algorithm,
            job.seed,
            iteration,
            fmt_float(*elapsed),
            job.metric_name,
            fmt_float(*value),
        ));
    }
    out
}

/// Runs every (seed, algorithm) job and writes one CSV per job plus an
/// aggregate of per-iteration means across seeds. Returns the written paths.
pub fn run_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<PathBuf>, RunError> {
    let jobs: Vec<(u64, AlgorithmSpec)> = cfg
        .seeds
        .iter()
        .flat_map(|&s| cfg.algorithms.iter().map(move |&a| (s, a)))
        .collect();

    let outputs: Result<Vec<JobOutput>, RunError> = if threads == 1 {
        jobs.iter().map(|&(s, a)| run_job(cfg, s, a)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| {
                RunError::Io(std::io::Error::other(format!("thread pool: {e}")))
            })?;
        pool.install(|| jobs.par_iter().map(|&(s, a)| run_job(cfg, s, a)).collect())
    };
    let outputs = outputs?;

    fs::create_dir_all(&cfg.out_dir)?;
    let mut written = Vec::new();
    for job in &outputs {
        let path = cfg.out_dir.join(format!("{}.csv", job.run_id));
        fs::write(&path, job_to_csv(job))?;
        written.push(path);
    }

    // Aggregate: mean metric value per (algorithm, iteration) across seeds.
    let mut groups: BTreeMap<(String, usize), (f64, usize, &'static str)> = BTreeMap::new();
    for job in &outputs {
        for (iteration, _, value) in &job.rows {
            let entry = groups
                .entry((job.algorithm.clone(), *iteration))
                .or_insert((0.0, 0, job.metric_name));
            entry.0 += value;
            entry.1 += 1;
        }
    }
    let mut agg = String::from("algorithm,iteration,metric,mean_value,seeds\n");
    for ((algorithm, iteration), (sum, count, metric)) in &groups {
        agg.push_str(&format!(
            "{},{},{},{},{}\n",
            algorithm,
            iteration,
            metric,
            fmt_float(sum / *count as f64),
            count
        ));
    }
    let agg_path = cfg.out_dir.join("aggregate.csv");
    fs::write(&agg_path, agg)?;
    written.push(agg_path);

    Ok(written)
}
