//! Class-distribution samplers and the rank machinery that drives the
//! distribution-based analysis.
//!
//! A sampled element carries a *rank*: the index of its class when classes
//! are ordered most-likely-first. Ranks at or beyond `n` are piled up onto
//! `n`, so the rank space for a run of size `n` is `{0, ..., n}`. Labels for
//! a run are the ranks verbatim, and twice the rank sum upper-bounds the
//! round-robin sorter's comparison count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::GroundTruth;

#[derive(Clone, Debug, PartialEq)]
pub enum ClassDistribution {
    /// Equally likely classes `0..k`.
    Uniform { k: usize },
    /// Rank `i` with probability `p^i (1-p)`: the number of successes before
    /// the first failure when success has probability `p`.
    Geometric { p: f64 },
    /// Ranks follow the Poisson pmf reordered most-likely-first.
    Poisson { lambda: f64 },
    /// One-based class `i` with probability `i^-s / zeta(s)`, shifted to
    /// zero-based ranks.
    Zeta { s: f64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistError {
    #[error("uniform class count must be at least 1")]
    BadK,
    #[error("geometric parameter must satisfy 0 < p < 1")]
    BadP,
    #[error("poisson rate must be positive and finite")]
    BadLambda,
    #[error("zeta exponent must satisfy s > 1")]
    BadS,
    #[error("sample size must be at least 1")]
    BadN,
}

impl ClassDistribution {
    pub fn validate(&self) -> Result<(), DistError> {
        match *self {
            ClassDistribution::Uniform { k } => {
                if k < 1 {
                    return Err(DistError::BadK);
                }
            }
            ClassDistribution::Geometric { p } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(DistError::BadP);
                }
            }
            ClassDistribution::Poisson { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(DistError::BadLambda);
                }
            }
            ClassDistribution::Zeta { s } => {
                if !(s > 1.0 && s.is_finite()) {
                    return Err(DistError::BadS);
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassDistribution::Uniform { .. } => "uniform",
            ClassDistribution::Geometric { .. } => "geometric",
            ClassDistribution::Poisson { .. } => "poisson",
            ClassDistribution::Zeta { .. } => "zeta",
        }
    }

    pub fn param_string(&self) -> String {
        match *self {
            ClassDistribution::Uniform { k } => format!("k={k}"),
            ClassDistribution::Geometric { p } => format!("p={p}"),
            ClassDistribution::Poisson { lambda } => format!("lambda={lambda}"),
            ClassDistribution::Zeta { s } => format!("s={s}"),
        }
    }

    /// Rough mean rank for a run of size `n`; only used to budget grids
    /// before running them.
    pub fn mean_rank_estimate(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            ClassDistribution::Uniform { k } => (k.min(n + 1) as f64 - 1.0) / 2.0,
            ClassDistribution::Geometric { p } => p / (1.0 - p),
            ClassDistribution::Poisson { lambda } => lambda.sqrt() * 1.6 + 1.0,
            ClassDistribution::Zeta { s } => {
                if s > 2.0 {
                    riemann_zeta(s - 1.0) / riemann_zeta(s)
                } else if (s - 2.0).abs() < 1e-9 {
                    nf.ln() / riemann_zeta(2.0)
                } else {
                    (nf.powf(2.0 - s) - 1.0) / ((2.0 - s) * riemann_zeta(s))
                }
            }
        }
    }
}

/// Ranks drawn for the `n` elements of one run, truncated at `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSample {
    pub ranks: Vec<usize>,
}

impl RankSample {
    pub fn n(&self) -> usize {
        self.ranks.len()
    }
}

/// Draw `n` independent ranks. Deterministic under `seed`.
pub fn sample_ranks(
    dist: &ClassDistribution,
    n: usize,
    seed: u64,
) -> Result<RankSample, DistError> {
    dist.validate()?;
    if n == 0 {
        return Err(DistError::BadN);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks = match *dist {
        ClassDistribution::Uniform { k } => {
            (0..n).map(|_| rng.gen_range(0..k).min(n)).collect()
        }
        ClassDistribution::Geometric { p } => {
            let ln_p = p.ln();
            (0..n)
                .map(|_| {
                    let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
                    let raw = (u.ln() / ln_p).floor();
                    if raw >= n as f64 {
                        n
                    } else {
                        raw as usize
                    }
                })
                .collect()
        }
        ClassDistribution::Poisson { lambda } => {
            // Exact inverse-CDF over ranks: the pmf sorted most-likely-first,
            // with everything past rank n-1 pooled onto n.
            let cdf = poisson_rank_cdf(lambda, n);
            draw_from_cdf(&mut rng, &cdf, n)
        }
        ClassDistribution::Zeta { s } => {
            let cdf = zeta_rank_cdf(s, n);
            draw_from_cdf(&mut rng, &cdf, n)
        }
    };
    Ok(RankSample { ranks })
}

fn draw_from_cdf(rng: &mut ChaCha8Rng, cdf: &[f64], n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen(); // [0, 1)
            let idx = cdf.partition_point(|&c| c <= u);
            idx.min(n)
        })
        .collect()
}

/// Prefix CDF over zeta ranks `0..n-1`; mass beyond falls through to rank n.
fn zeta_rank_cdf(s: f64, n: usize) -> Vec<f64> {
    let z = riemann_zeta(s);
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for r in 0..n {
        acc += ((r + 1) as f64).powf(-s) / z;
        cdf.push(acc.min(1.0));
    }
    cdf
}

/// Poisson outcomes sorted by descending pmf (ties to the smaller outcome),
/// truncated to the first `n` ranks; the tail falls through to rank n.
fn poisson_rank_cdf(lambda: f64, n: usize) -> Vec<f64> {
    let (order, log_pmf) = poisson_rank_order_with_logs(lambda, n);
    let mut cdf = Vec::with_capacity(order.len());
    let mut acc = 0.0;
    for &outcome in &order {
        acc += log_pmf[outcome].exp();
        cdf.push(acc.min(1.0));
    }
    cdf
}

#[cfg(test)]
fn poisson_pmf(lambda: f64, k: usize) -> f64 {
    let mut logp = -lambda;
    let ln_l = lambda.ln();
    for i in 1..=k {
        logp += ln_l - (i as f64).ln();
    }
    logp.exp()
}

/// The first `n` outcomes in most-likely-first order.
#[cfg(test)]
fn poisson_rank_order(lambda: f64, n: usize) -> Vec<usize> {
    poisson_rank_order_with_logs(lambda, n).0
}

fn poisson_rank_order_with_logs(lambda: f64, n: usize) -> (Vec<usize>, Vec<f64>) {
    let mode = lambda.floor() as usize;
    // Outcomes beyond bound cannot be among the n most likely: the upward
    // run alone already fills n ranks before reaching them.
    let bound = n + mode + 2;
    let mut log_pmf = Vec::with_capacity(bound + 1);
    let ln_l = lambda.ln();
    let mut acc = -lambda;
    log_pmf.push(acc);
    for i in 1..=bound {
        acc += ln_l - (i as f64).ln();
        log_pmf.push(acc);
    }
    let mut outcomes: Vec<usize> = (0..=bound).collect();
    // Quantized key gives a total order while keeping exact pmf ties
    // (integer lambda) resolved toward the smaller outcome.
    let quant = |v: f64| -> i64 { (v / 1e-9).round() as i64 };
    outcomes.sort_by_key(|&o| (std::cmp::Reverse(quant(log_pmf[o])), o));
    outcomes.truncate(n);
    (outcomes, log_pmf)
}

/// Riemann zeta for s > 1: direct prefix sum plus an Euler-Maclaurin tail.
/// Relative error is far below 1e-12 across the whole admissible range.
pub fn riemann_zeta(s: f64) -> f64 {
    debug_assert!(s > 1.0);
    let cutoff = 10_000u64;
    let mut sum = 0.0;
    for k in 1..cutoff {
        sum += (k as f64).powf(-s);
    }
    let nf = cutoff as f64;
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0
}

/// The per-run upper bound on round-robin comparisons: twice the rank sum.
pub fn dominance_bound(sample: &RankSample) -> u64 {
    2 * sample.ranks.iter().map(|&r| r as u64).sum::<u64>()
}

/// Ranks are the class labels of the realized instance; class sizes are the
/// rank multiplicities.
pub fn realize_labels(sample: &RankSample) -> GroundTruth {
    GroundTruth::new(sample.ranks.clone()).expect("rank samples are non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_matches_reference_values() {
        let cases = [
            (2.0, std::f64::consts::PI * std::f64::consts::PI / 6.0),
            (1.5, 2.612_375_348_685_488),
            (2.5, 1.341_487_257_250_917),
            (3.0, 1.202_056_903_159_594),
            (4.0, 1.082_323_233_711_138),
        ];
        for (s, want) in cases {
            let got = riemann_zeta(s);
            assert!(
                (got - want).abs() / want < 1e-12,
                "zeta({s}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn uniform_single_class_all_rank_zero() {
        let sample = sample_ranks(&ClassDistribution::Uniform { k: 1 }, 50, 3).unwrap();
        assert!(sample.ranks.iter().all(|&r| r == 0));
    }

    #[test]
    fn geometric_head_probability() {
        let n = 100_000;
        let sample = sample_ranks(&ClassDistribution::Geometric { p: 0.5 }, n, 11).unwrap();
        let zeros = sample.ranks.iter().filter(|&&r| r == 0).count() as f64;
        let p_hat = zeros / n as f64;
        let sigma = (0.5 * 0.5 / n as f64).sqrt();
        assert!(
            (p_hat - 0.5).abs() <= 3.0 * sigma,
            "p_hat={p_hat}, sigma={sigma}"
        );
    }

    #[test]
    fn zeta_head_probability() {
        let n = 100_000;
        let sample = sample_ranks(&ClassDistribution::Zeta { s: 2.0 }, n, 13).unwrap();
        let want = 1.0 / riemann_zeta(2.0); // 6 / pi^2
        let zeros = sample.ranks.iter().filter(|&&r| r == 0).count() as f64;
        let p_hat = zeros / n as f64;
        let sigma = (want * (1.0 - want) / n as f64).sqrt();
        assert!(
            (p_hat - want).abs() <= 3.0 * sigma,
            "p_hat={p_hat}, want={want}"
        );
    }

    #[test]
    fn zeta_mean_matches_closed_form() {
        // One-based class index has mean zeta(s-1)/zeta(s) for s > 2.
        let s = 2.5;
        let n = 100_000;
        let sample = sample_ranks(&ClassDistribution::Zeta { s }, n, 17).unwrap();
        let mean_one_based = sample
            .ranks
            .iter()
            .map(|&r| (r + 1) as f64)
            .sum::<f64>()
            / n as f64;
        let want = riemann_zeta(s - 1.0) / riemann_zeta(s);
        assert!(
            (mean_one_based - want).abs() / want < 0.05,
            "mean={mean_one_based}, want={want}"
        );
    }

    #[test]
    fn poisson_most_likely_first_order() {
        // lambda = 1: pmf(0) = pmf(1), tie resolved toward 0.
        let order = poisson_rank_order(1.0, 6);
        assert_eq!(&order[..3], &[0, 1, 2]);
        // lambda = 5: pmf(4) = pmf(5), so outcome 4 is rank 0.
        let order = poisson_rank_order(5.0, 8);
        assert_eq!(&order[..2], &[4, 5]);
        // unimodal descent away from the mode
        let order = poisson_rank_order(2.5, 10);
        assert_eq!(order[0], 2);
    }

    #[test]
    fn poisson_rank_mean_sane() {
        let n = 50_000;
        let sample = sample_ranks(&ClassDistribution::Poisson { lambda: 5.0 }, n, 19).unwrap();
        let mean = sample.ranks.iter().sum::<usize>() as f64 / n as f64;
        // Exact mean of the rank distribution computed from the pmf order.
        let order = poisson_rank_order(5.0, 200);
        let want: f64 = order
            .iter()
            .enumerate()
            .map(|(rank, &o)| rank as f64 * poisson_pmf(5.0, o))
            .sum();
        assert!((mean - want).abs() < 0.05, "mean={mean}, want={want}");
    }

    #[test]
    fn truncation_piles_tail_mass_on_n() {
        let n = 5;
        let p = 0.5;
        let draws = 200_000;
        // Aggregate over many small samples to estimate P(rank = n).
        let mut at_n = 0usize;
        let mut total = 0usize;
        for seed in 0..(draws / n) as u64 {
            let sample =
                sample_ranks(&ClassDistribution::Geometric { p }, n, 1000 + seed).unwrap();
            at_n += sample.ranks.iter().filter(|&&r| r == n).count();
            total += n;
        }
        let p_hat = at_n as f64 / total as f64;
        let want = p.powi(n as i32); // P(raw rank >= n)
        let sigma = (want * (1.0 - want) / total as f64).sqrt();
        assert!(
            (p_hat - want).abs() <= 4.0 * sigma,
            "p_hat={p_hat}, want={want}"
        );
    }

    #[test]
    fn deterministic_under_seed() {
        for dist in [
            ClassDistribution::Uniform { k: 7 },
            ClassDistribution::Geometric { p: 0.3 },
            ClassDistribution::Poisson { lambda: 4.2 },
            ClassDistribution::Zeta { s: 1.7 },
        ] {
            let a = sample_ranks(&dist, 500, 99).unwrap();
            let b = sample_ranks(&dist, 500, 99).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert_eq!(
            sample_ranks(&ClassDistribution::Uniform { k: 0 }, 5, 0),
            Err(DistError::BadK)
        );
        assert_eq!(
            sample_ranks(&ClassDistribution::Geometric { p: 1.0 }, 5, 0),
            Err(DistError::BadP)
        );
        assert_eq!(
            sample_ranks(&ClassDistribution::Zeta { s: 1.0 }, 5, 0),
            Err(DistError::BadS)
        );
        assert_eq!(
            sample_ranks(&ClassDistribution::Poisson { lambda: 0.0 }, 5, 0),
            Err(DistError::BadLambda)
        );
    }

    #[test]
    fn dominance_bound_arithmetic() {
        assert_eq!(dominance_bound(&RankSample { ranks: vec![0, 0, 0] }), 0);
        assert_eq!(dominance_bound(&RankSample { ranks: vec![1, 2, 3] }), 12);
    }

    #[test]
    fn labels_are_ranks() {
        let sample = RankSample { ranks: vec![0, 1, 0] };
        let truth = realize_labels(&sample);
        assert_eq!(truth.classes(), vec![vec![0, 2], vec![1]]);
        let all_same = realize_labels(&RankSample { ranks: vec![4, 4, 4] });
        assert_eq!(all_same.class_count(), 1);
        let all_diff = realize_labels(&RankSample { ranks: vec![0, 1, 2] });
        assert_eq!(all_diff.class_count(), 3);
    }
}
