//! Constant-round ER sorting for inputs whose smallest class holds at least
//! a `lambda` fraction of the elements: compare along a union of random
//! Hamiltonian cycles, keep the large strongly connected components of the
//! Same-answered arcs, then sweep each kept component against the rest.

use crate::fast_hash::FastSet;

use super::hd::{sample_cycle_union, tarjan_scc};
use super::{IncompleteAttempt, Runner, SortError, SortOptions};
use crate::model::{Oracle, RoundMode, RoundSchedule, RunMetrics};
use crate::partition::{PartitionState, Relation};

/// The fraction of a kept component relative to `lambda * n`; components of
/// size at least `lambda * n / 8` survive.
pub const KEEP_DENOMINATOR: f64 = 8.0;

#[derive(Clone, Debug)]
pub struct ConstantRoundParams {
    /// Guaranteed smallest-class fraction, in (0, 0.4].
    pub lambda_frac: f64,
    /// Cycle count from the closed-form bound for this lambda.
    pub d: usize,
    /// Experimental override; correctness is retry-protected, so a small `d`
    /// only risks extra retries.
    pub override_d: Option<usize>,
}

impl ConstantRoundParams {
    pub fn for_lambda(lambda_frac: f64) -> Result<Self, SortError> {
        Ok(Self { lambda_frac, d: compute_d(lambda_frac)?, override_d: None })
    }

    pub fn effective_d(&self) -> usize {
        self.override_d.unwrap_or(self.d)
    }
}

/// Smallest integer `d` that makes the failure exponent negative:
/// `(1 + lambda) ln 2 - d lambda^2 / 8 < 0`.
pub fn compute_d(lambda: f64) -> Result<usize, SortError> {
    if !(lambda > 0.0 && lambda <= 0.4) {
        return Err(SortError::LambdaOutOfRange(lambda));
    }
    let bound = 8.0 * (1.0 + lambda) * std::f64::consts::LN_2 / (lambda * lambda);
    Ok(bound.floor() as usize + 1)
}

/// The quartic upper bound on the per-cycle exponent, valid on (0, 0.4].
/// Sits between the exact exponent and the final `-lambda^2 / 8` bound.
pub fn quartic_exponent_bound(lambda: f64) -> f64 {
    -3743.0 / 8192.0 * lambda.powi(4) + 19.0 / 256.0 * lambda.powi(3)
        - 15.0 / 64.0 * lambda.powi(2)
}

/// The exact per-cycle exponent `a ln a + b ln b - (1-l) ln (1-l)` with
/// `a = 1 - 3l/8` and `b = 1 - 5l/8`.
pub fn exact_exponent(lambda: f64) -> f64 {
    let a = 1.0 - 0.375 * lambda;
    let b = 1.0 - 0.625 * lambda;
    a * a.ln() + b * b.ln() - (1.0 - lambda) * (1.0 - lambda).ln()
}

/// Per-step accounting of one constant-round attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantRoundReport {
    pub step2_rounds: usize,
    pub step3_rounds: usize,
    pub kept_components: usize,
    pub component_rounds: Vec<usize>,
}

#[derive(Debug)]
pub struct ConstantOutcome {
    pub partition: PartitionState,
    pub metrics: RunMetrics,
    pub schedules: Vec<(RoundMode, RoundSchedule)>,
    pub report: ConstantRoundReport,
}

#[derive(Clone, Debug)]
pub struct AttemptInfo {
    pub lambda: f64,
    pub d: usize,
    pub succeeded: bool,
}

#[derive(Debug)]
pub struct RetryOutcome {
    pub partition: PartitionState,
    pub metrics: RunMetrics,
    pub schedules: Vec<(RoundMode, RoundSchedule)>,
    pub attempts: Vec<AttemptInfo>,
    /// Set when the run abandoned the constant-round path for the merge-tree
    /// sorter (degenerate inputs).
    pub fell_back: bool,
    pub report: Option<ConstantRoundReport>,
}

/// One constant-round attempt. Succeeds iff the knowledge graph is complete
/// afterwards; an incomplete attempt keeps its comparison accounting so the
/// retry wrapper can charge it, and never returns a wrong partition.
pub fn er_constant_sort(
    oracle: &mut dyn Oracle,
    n: usize,
    params: &ConstantRoundParams,
    seed: u64,
    opts: &SortOptions,
) -> Result<ConstantOutcome, SortError> {
    if !(params.lambda_frac > 0.0 && params.lambda_frac <= 0.4) {
        return Err(SortError::LambdaOutOfRange(params.lambda_frac));
    }
    let mut runner = Runner::new(oracle, RoundMode::Er, n, opts)?;
    match run_attempt(&mut runner, n, params, seed, opts)? {
        Some(report) => {
            let outcome = runner.finish();
            Ok(ConstantOutcome {
                partition: outcome.partition,
                metrics: outcome.metrics,
                schedules: outcome.schedules,
                report,
            })
        }
        None => {
            let (metrics, schedules) = runner.into_parts();
            Err(SortError::ConstantRoundIncomplete(Box::new(IncompleteAttempt {
                metrics,
                schedules,
            })))
        }
    }
}

/// Runs steps 2 and 3 against the runner's fresh knowledge graph.
/// `Ok(None)` means the attempt ended with an incomplete graph.
fn run_attempt(
    runner: &mut Runner,
    n: usize,
    params: &ConstantRoundParams,
    seed: u64,
    opts: &SortOptions,
) -> Result<Option<ConstantRoundReport>, SortError> {
    let d = params.effective_d();
    let graph = sample_cycle_union(n, d, seed);

    // Step 2: each cycle's arcs as alternating matchings. Even-position arcs
    // first, then odd-position arcs; an odd n leaves the wrap arc to a third
    // sub-round. Arcs already compared (the union is simple) are skipped.
    let rounds_before = runner.metrics.rounds();
    let mut seen: FastSet<(usize, usize)> = FastSet::default();
    for cycle in graph.cycles() {
        let arc = |i: usize| (cycle[i], cycle[(i + 1) % n]);
        let mut sub_rounds: Vec<Vec<(usize, usize)>> = Vec::with_capacity(3);
        if n % 2 == 0 {
            sub_rounds.push((0..n).step_by(2).map(arc).collect());
            sub_rounds.push((1..n).step_by(2).map(arc).collect());
        } else {
            sub_rounds.push((0..n - 1).step_by(2).map(arc).collect());
            sub_rounds.push((1..n - 1).step_by(2).map(arc).collect());
            sub_rounds.push(vec![arc(n - 1)]);
        }
        for sub in sub_rounds {
            let fresh: Vec<(usize, usize)> = sub
                .into_iter()
                .filter(|&(u, v)| seen.insert(canon(u, v)))
                .collect();
            runner.execute(fresh)?;
        }
    }
    let step2_rounds = runner.metrics.rounds() - rounds_before;

    // Same-answered arcs induce a subgraph whose strongly connected
    // components are class-pure; keep the ones above the size threshold.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in graph.arcs() {
        if runner.knowledge.root_of(u) == runner.knowledge.root_of(v) {
            adj[u].push(v);
        }
    }
    let threshold = params.lambda_frac * n as f64 / KEEP_DENOMINATOR;
    let mut kept: Vec<Vec<usize>> = tarjan_scc(&adj)
        .into_iter()
        .filter(|c| c.len() as f64 >= threshold)
        .collect();
    kept.sort_by_key(|c| c[0]);

    // Step 3: pair each kept component against the remaining elements, a
    // component's worth at a time. Components run one after another so the
    // rounds stay exclusive-read.
    let step3_start = runner.metrics.rounds();
    let mut component_rounds = Vec::with_capacity(kept.len());
    for component in &kept {
        let in_component: FastSet<usize> = component.iter().copied().collect();
        let rep = component[0];
        let before = runner.metrics.rounds();
        let mut others = (0..n).filter(|e| !in_component.contains(e));
        loop {
            let mut batch = Vec::with_capacity(component.len());
            for y in others.by_ref() {
                if opts.prune && runner.knowledge.relation_known(rep, y) != Relation::Unknown {
                    continue;
                }
                batch.push(y);
                if batch.len() == component.len() {
                    break;
                }
            }
            if batch.is_empty() {
                break;
            }
            let pairs: Vec<(usize, usize)> =
                component.iter().zip(&batch).map(|(&c, &y)| (c, y)).collect();
            runner.execute(pairs)?;
        }
        component_rounds.push(runner.metrics.rounds() - before);
    }
    let step3_rounds = runner.metrics.rounds() - step3_start;

    if runner.knowledge.is_complete() {
        Ok(Some(ConstantRoundReport {
            step2_rounds,
            step3_rounds,
            kept_components: kept.len(),
            component_rounds,
        }))
    } else {
        Ok(None)
    }
}

fn canon(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Run the constant-round sorter without knowing lambda: start at 0.4 and
/// halve after every failed attempt. Degenerate inputs (lambda would drop
/// below 1/n, or the cycle budget would reach the complete graph) fall back
/// to the ER merge-tree sorter. Metrics accumulate across every attempt.
pub fn er_constant_retry(
    oracle: &mut dyn Oracle,
    n: usize,
    seed: u64,
    opts: &SortOptions,
    override_d: Option<usize>,
) -> Result<RetryOutcome, SortError> {
    let mut attempts: Vec<AttemptInfo> = Vec::new();

    if n >= 3 {
        let mut runner = Runner::new(oracle, RoundMode::Er, n, opts)?;
        let mut lambda: f64 = 0.4;
        let mut attempt_index: u64 = 0;
        loop {
            if lambda < 1.0 / n as f64 {
                break; // even a singleton class satisfies the guarantee; give up
            }
            let d = compute_d(lambda)?;
            let params = ConstantRoundParams { lambda_frac: lambda, d, override_d };
            if params.effective_d() >= n {
                break; // the cycle union saturates the complete graph
            }
            runner.reset_knowledge()?;
            let attempt_seed = mix_seed(seed, attempt_index);
            match run_attempt(&mut runner, n, &params, attempt_seed, opts)? {
                Some(report) => {
                    attempts.push(AttemptInfo {
                        lambda,
                        d: params.effective_d(),
                        succeeded: true,
                    });
                    let outcome = runner.finish();
                    return Ok(RetryOutcome {
                        partition: outcome.partition,
                        metrics: outcome.metrics,
                        schedules: outcome.schedules,
                        attempts,
                        fell_back: false,
                        report: Some(report),
                    });
                }
                None => {
                    attempts.push(AttemptInfo {
                        lambda,
                        d: params.effective_d(),
                        succeeded: false,
                    });
                    lambda /= 2.0;
                    attempt_index += 1;
                }
            }
        }
        let (mut metrics, mut schedules) = runner.into_parts();
        let fallback = super::er_sort(oracle, n, opts)?;
        metrics.absorb(&fallback.metrics);
        schedules.extend(fallback.schedules);
        return Ok(RetryOutcome {
            partition: fallback.partition,
            metrics,
            schedules,
            attempts,
            fell_back: true,
            report: None,
        });
    }

    let fallback = super::er_sort(oracle, n, opts)?;
    Ok(RetryOutcome {
        partition: fallback.partition,
        metrics: fallback.metrics,
        schedules: fallback.schedules,
        attempts,
        fell_back: true,
        report: None,
    })
}

fn mix_seed(seed: u64, attempt: u64) -> u64 {
    // splitmix64 step keeps per-attempt streams independent
    let mut z = seed ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
