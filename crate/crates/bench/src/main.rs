use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ecs_bench::{
    fit_rows, render_csv, render_json, run_experiment, write_results, AlgorithmKind, BenchError,
    ExperimentConfig, OracleSpec, OutputFormat,
};
use ecs_core::dist::ClassDistribution;

/// Benchmark runner for the equivalence-class sorting simulator.
///
/// Runs an (algorithm x oracle x n x trial) grid, records comparisons and
/// rounds per run, fits comparisons against n, and writes CSV or JSON.
#[derive(Parser, Debug)]
#[command(name = "ecs-bench", version, about)]
struct Cli {
    /// Sorting algorithm to benchmark.
    #[arg(long, value_enum)]
    algo: AlgoArg,

    /// Class distribution driving the sampled instances.
    #[arg(long, value_enum)]
    dist: Option<DistArg>,

    /// Distribution parameter as key=value (k=, p=, lambda=, s=). Repeatable.
    #[arg(long = "param")]
    params: Vec<String>,

    /// Sizes: either start:end:step (inclusive) or a comma list.
    #[arg(long = "n-grid")]
    n_grid: String,

    /// Trials per size.
    #[arg(long, default_value_t = 1)]
    trials: usize,

    /// Base seed; the per-run seed is a stable function of (seed, n, trial).
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Disable early-exit pruning inside merges (worst-case measurement).
    #[arg(long)]
    no_prune: bool,

    /// Override the cycle count of the constant-round sorter.
    #[arg(long)]
    override_d: Option<usize>,

    /// Switch the oracle to adversarial mode: f=<int> or ell=<int>.
    #[arg(long)]
    adversary: Option<String>,

    /// Class-count hint passed to the k-driven sorters.
    #[arg(long)]
    k_hint: Option<usize>,

    /// Refuse grids predicted to exceed this many total comparisons.
    #[arg(long, default_value_t = 5_000_000_000)]
    max_comparisons: u64,

    /// Record real wall-clock times (breaks byte-reproducibility of output).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Cr,
    Er,
    ErConstant,
    RoundRobin,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DistArg {
    Uniform,
    Geometric,
    Poisson,
    Zeta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_n_grid(text: &str) -> Result<Vec<usize>, String> {
    let grid: Vec<usize> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("bad n-grid '{text}': want start:end:step"));
        }
        let start: usize = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
        let end: usize = parts[1].parse().map_err(|_| format!("bad grid end '{}'", parts[1]))?;
        let step: usize = parts[2].parse().map_err(|_| format!("bad grid step '{}'", parts[2]))?;
        if step == 0 || start == 0 || end < start {
            return Err(format!("bad n-grid '{text}'"));
        }
        (start..=end).step_by(step).collect()
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad grid entry '{p}'")))
            .collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err("empty n-grid".to_string());
    }
    Ok(grid)
}

fn parse_params(pairs: &[String]) -> Result<std::collections::HashMap<String, f64>, String> {
    let mut map = std::collections::HashMap::new();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("bad --param '{pair}': want key=value"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("bad --param value in '{pair}'"))?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

fn build_oracle(cli: &Cli) -> Result<OracleSpec, String> {
    if let Some(adv) = &cli.adversary {
        if cli.dist.is_some() {
            return Err("--adversary and --dist are mutually exclusive".to_string());
        }
        let (key, value) = adv
            .split_once('=')
            .ok_or_else(|| format!("bad --adversary '{adv}': want f=<int> or ell=<int>"))?;
        let value: usize = value
            .parse()
            .map_err(|_| format!("bad --adversary value in '{adv}'"))?;
        return match key.trim() {
            "f" => Ok(OracleSpec::AdversaryUniform { f: value }),
            "ell" => Ok(OracleSpec::AdversarySmallestClass { ell: value }),
            other => Err(format!("unknown adversary mode '{other}'")),
        };
    }
    let dist = cli.dist.ok_or("one of --dist or --adversary is required")?;
    let params = parse_params(&cli.params)?;
    let take = |key: &str| -> Result<f64, String> {
        params
            .get(key)
            .copied()
            .ok_or_else(|| format!("distribution requires --param {key}=<value>"))
    };
    let dist = match dist {
        DistArg::Uniform => ClassDistribution::Uniform { k: take("k")? as usize },
        DistArg::Geometric => ClassDistribution::Geometric { p: take("p")? },
        DistArg::Poisson => ClassDistribution::Poisson { lambda: take("lambda")? },
        DistArg::Zeta => ClassDistribution::Zeta { s: take("s")? },
    };
    dist.validate().map_err(|e| e.to_string())?;
    Ok(OracleSpec::Distribution(dist))
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let algorithm = match cli.algo {
        AlgoArg::Cr => AlgorithmKind::Cr,
        AlgoArg::Er => AlgorithmKind::Er,
        AlgoArg::ErConstant => AlgorithmKind::ErConstant,
        AlgoArg::RoundRobin => AlgorithmKind::RoundRobin,
    };
    let oracle = build_oracle(cli)?;
    let n_grid = parse_n_grid(&cli.n_grid)?;
    let mut cfg = ExperimentConfig::new(algorithm, oracle, n_grid);
    cfg.trials = cli.trials;
    cfg.base_seed = cli.seed;
    cfg.prune = !cli.no_prune;
    cfg.override_d = cli.override_d;
    cfg.k_hint = cli.k_hint;
    cfg.max_predicted_comparisons = cli.max_comparisons;
    cfg.record_wall_time = cli.timing;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with 2 on usage errors

    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let rows = match run_experiment(&cfg) {
        Ok(rows) => rows,
        Err(e @ (BenchError::BadGrid | BenchError::BadTrials)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e @ BenchError::GridTooLarge { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e @ (BenchError::Dist(_) | BenchError::Adversary(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let fits = fit_rows(&rows);

    match &cli.out {
        Some(path) => {
            let format = match cli.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
            if let Err(e) = write_results(&rows, &fits, path, format) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        None => {
            let body = match cli.format {
                FormatArg::Csv => render_csv(&rows),
                FormatArg::Json => render_json(&rows, &fits),
            };
            print!("{body}");
        }
    }
    ExitCode::SUCCESS
}
