//! Experiment harness around the sorting library: runs
//! (algorithm x oracle x size x trial) grids, records comparison and round
//! totals, fits comparison counts against n, and writes CSV or JSON.

mod config;
mod fit;
mod output;
mod run;

pub use config::{AlgorithmKind, BenchError, ExperimentConfig, OracleSpec};
pub use fit::{fit_rows, linear_fit, FitReport, FitRow};
pub use output::{render_csv, render_json, write_results, OutputFormat};
pub use run::{predict_total_comparisons, run_experiment, run_single, trial_seed, ResultRow};
