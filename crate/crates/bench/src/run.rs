use std::time::Instant;

use ecs_core::adversary::AdversaryState;
use ecs_core::dist::{realize_labels, sample_ranks};
use ecs_core::model::Oracle;
use ecs_core::parallel::{cr_sort, er_constant_retry, er_sort};
use ecs_core::round_robin::round_robin_sort;
use ecs_core::{make_truth_oracle, SortOptions};
use serde::Serialize;

use crate::config::{AlgorithmKind, BenchError, ExperimentConfig, OracleSpec};

/// One run's record; field names match the CSV header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub algorithm: String,
    pub distribution: String,
    pub params: String,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub comparisons: u64,
    pub rounds: usize,
    pub wall_seconds: f64,
}

/// Stable per-trial seed: a splitmix64 mix of the base seed, the size, and
/// the trial index.
pub fn trial_seed(base_seed: u64, n: usize, trial: usize) -> u64 {
    let mut z = base_seed
        .wrapping_add((n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add((trial as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Crude upper estimate of the comparisons one run will perform; the guard
/// only needs the right order of magnitude.
fn predict_single(cfg: &ExperimentConfig, n: usize) -> u64 {
    let nf = n as f64;
    let estimate = match &cfg.oracle {
        OracleSpec::Distribution(dist) => {
            let mean_rank = dist.mean_rank_estimate(n).max(0.0);
            let k_hat = cfg
                .k_hint
                .map(|k| k as f64)
                .unwrap_or((3.0 * mean_rank + 3.0).min(nf));
            match cfg.algorithm {
                AlgorithmKind::RoundRobin => 2.0 * nf * mean_rank + 2.0 * nf,
                AlgorithmKind::Cr | AlgorithmKind::Er => nf * (k_hat + 2.0),
                // retry ladder: a few cycle unions plus the fallback
                AlgorithmKind::ErConstant => {
                    let d = cfg.override_d.map(|d| d as f64).unwrap_or(49.0);
                    3.0 * d.min(nf) * nf + nf * (k_hat + 2.0)
                }
            }
        }
        // adversarial runs are quadratic by design
        OracleSpec::AdversaryUniform { .. } | OracleSpec::AdversarySmallestClass { .. } => nf * nf,
    };
    estimate.min(u64::MAX as f64) as u64
}

pub fn predict_total_comparisons(cfg: &ExperimentConfig) -> u64 {
    cfg.n_grid
        .iter()
        .map(|&n| predict_single(cfg, n).saturating_mul(cfg.trials as u64))
        .fold(0u64, u64::saturating_add)
}

fn sort_options(cfg: &ExperimentConfig) -> SortOptions {
    SortOptions {
        k_hint: cfg.k_hint,
        prune: cfg.prune,
        record_schedules: false,
    }
}

fn dispatch(
    cfg: &ExperimentConfig,
    oracle: &mut dyn Oracle,
    n: usize,
    seed: u64,
) -> Result<(u64, usize), BenchError> {
    let opts = sort_options(cfg);
    Ok(match cfg.algorithm {
        AlgorithmKind::Cr => {
            let out = cr_sort(oracle, n, &opts)?;
            (out.metrics.total_comparisons, out.metrics.rounds())
        }
        AlgorithmKind::Er => {
            let out = er_sort(oracle, n, &opts)?;
            (out.metrics.total_comparisons, out.metrics.rounds())
        }
        AlgorithmKind::ErConstant => {
            let out = er_constant_retry(oracle, n, seed, &opts, cfg.override_d)?;
            (out.metrics.total_comparisons, out.metrics.rounds())
        }
        AlgorithmKind::RoundRobin => {
            let out = round_robin_sort(oracle, n)?;
            // not round-accounted
            (out.comparisons, 0)
        }
    })
}

/// Run one (n, trial) cell.
pub fn run_single(cfg: &ExperimentConfig, n: usize, trial: usize) -> Result<ResultRow, BenchError> {
    let seed = trial_seed(cfg.base_seed, n, trial);
    let started = Instant::now();
    let (comparisons, rounds) = match &cfg.oracle {
        OracleSpec::Distribution(dist) => {
            let sample = sample_ranks(dist, n, seed)?;
            let truth = realize_labels(&sample);
            let mut oracle = make_truth_oracle(&truth);
            dispatch(cfg, &mut oracle, n, seed)?
        }
        OracleSpec::AdversaryUniform { f } => {
            let mut adversary = AdversaryState::new_uniform(n, *f)?;
            dispatch(cfg, &mut adversary, n, seed)?
        }
        OracleSpec::AdversarySmallestClass { ell } => {
            let mut adversary = AdversaryState::new_smallest_class(n, *ell)?;
            dispatch(cfg, &mut adversary, n, seed)?
        }
    };
    let wall_seconds = if cfg.record_wall_time {
        started.elapsed().as_secs_f64()
    } else {
        0.0
    };
    Ok(ResultRow {
        algorithm: cfg.algorithm.name().to_string(),
        distribution: cfg.oracle.distribution_name(),
        params: cfg.oracle.param_string(),
        n,
        trial,
        seed,
        comparisons,
        rounds,
        wall_seconds,
    })
}

/// Run the whole grid in (n, trial) order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, BenchError> {
    cfg.validate()?;
    let predicted = predict_total_comparisons(cfg);
    if predicted > cfg.max_predicted_comparisons {
        return Err(BenchError::GridTooLarge {
            predicted,
            ceiling: cfg.max_predicted_comparisons,
        });
    }
    let mut rows = Vec::with_capacity(cfg.n_grid.len() * cfg.trials);
    for &n in &cfg.n_grid {
        for trial in 0..cfg.trials {
            rows.push(run_single(cfg, n, trial)?);
        }
    }
    Ok(rows)
}
