//! Library side of the benchmark command-line tool: configuration parsing,
//! experiment execution with CSV traces, SVG plotting, and the acceptance
//! suite.

pub mod acceptance;
pub mod config;
pub mod experiment;
pub mod plot;

pub use config::{AlgorithmSpec, ConfigError, ExperimentConfig, ProblemSpec};
pub use experiment::{run_experiment, RunError};
pub use plot::{render_plot, PlotAxis};
