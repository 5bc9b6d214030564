//! Benchmark CLI: seeded experiment runs, log-log convergence plots, the
//! acceptance suite, and a listing of the built-in problem families.
//!
//! Exit codes: 0 on success, 1 when acceptance criteria fail (or a run fails at
//! solve time), 2 on configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use saddle_cli::acceptance;
use saddle_cli::config::{ExperimentConfig, RawConfig};
use saddle_cli::experiment::{run_experiment, RunError};
use saddle_cli::plot::{render_plot, PlotAxis};

#[derive(Parser)]
#[command(
    name = "saddle",
    about = "Parameter-free saddle-point solver benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured experiment and write CSV traces.
    Run {
        /// Experiment configuration file (flat key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output.dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the config's seed list with a single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker pool size (0 = one worker per core).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Render a log-log convergence plot from trace CSVs.
    Plot {
        /// Trace CSV files (per-run outputs of `run`).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// X axis: `iterations` or `time`.
        #[arg(long, default_value = "iterations")]
        axis: String,
    },
    /// Run the acceptance suite and print one pass/fail line per criterion.
    Accept {
        /// Optional report file (CSV of criterion, measured, threshold, pass).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in problem families and their configuration keys.
    ListProblems,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let raw = match RawConfig::parse(&text) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
            };
            let mut cfg = match ExperimentConfig::from_raw(&raw) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
            };
            if let Some(dir) = out {
                cfg.out_dir = dir;
            }
            if let Some(s) = seed {
                cfg.seeds = vec![s];
            }
            match run_experiment(&cfg, threads) {
                Ok(files) => {
                    for f in &files {
                        println!("{}", f.display());
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(RunError::Config(e)) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Plot { inputs, out, axis } => {
            let axis = match PlotAxis::parse(&axis) {
                Some(a) => a,
                None => {
                    eprintln!("error: config key 'plot.axis': '{axis}' is not one of iterations, time");
                    return Ok(ExitCode::from(2));
                }
            };
            match render_plot(&inputs, axis) {
                Ok(svg) => {
                    fs::write(&out, svg)?;
                    println!("{}", out.display());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Accept { out } => {
            let reports = acceptance::run_all();
            for r in &reports {
                println!("{}", r.line());
            }
            if let Some(path) = out {
                let mut csv = String::from("criterion,name,pass,measured,threshold,seconds\n");
                for r in &reports {
                    csv.push_str(&format!(
                        "{},{},{},\"{}\",\"{}\",{:.2}\n",
                        r.index, r.name, r.pass, r.measured, r.threshold, r.seconds
                    ));
                }
                fs::write(&path, csv)?;
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            if failed == 0 {
                println!("all {} criteria passed", reports.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{failed} of {} criteria failed", reports.len());
                Ok(ExitCode::from(1))
            }
        }
        Command::ListProblems => {
            print!("{}", PROBLEM_LISTING);
            Ok(ExitCode::SUCCESS)
        }
    }
}

const PROBLEM_LISTING: &str = "\
matrix_game      min_x max_y <x, A y> over simplexes
    problem.rows, problem.cols          matrix dimensions
    problem.dist                        uniform01 | normal01 (default uniform01)

dro_synthetic    distributionally robust logistic regression, synthetic data
    problem.features, problem.samples   n and m
    problem.dist                        feature distribution (default uniform01)
    problem.flip_fraction               label noise (default 0.10)

dro_dataset      same objective on a sparse-format dataset file
    problem.path                        'label index:value ...' per line
    problem.features                    optional dense dimension override

garnet_mdp       discounted MDP saddle point on random Garnet instances
    problem.states, problem.actions     n and A
    problem.branching                   reachable-state fraction (default 0.5)
    problem.discount                    lambda (default 0.95)
    problem.reward_max                  uniform reward bound (default 10)

common keys
    problem.seeds                       comma-separated instance seeds
    algorithms                          sp_cba_plus, cba_uniform, rm_plus,
                                        {omd,ftrl,oomd,oftrl}_{theoretical,tuned}
    run.iterations                      iteration budget T
    run.metric_cadence                  extra metric every k iterations (0 = auto)
    run.timing                          off | wall (wall breaks byte-reproducibility)
    run.time_budget_seconds             optional early-stop budget
    output.dir                          trace output directory
";
