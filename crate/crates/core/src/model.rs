//! Comparison-model primitives: the oracle interface, ER/CR round legality,
//! and exact accounting of rounds and total comparisons.
//!
//! Rounds are synchronous batches of pairwise equivalence tests. Only rounds
//! that actually perform comparisons are counted; bookkeeping between rounds
//! is free.

use serde::Serialize;
use thiserror::Error;

use crate::fast_hash::FastSet;

/// Identifier of one input element. Ids are dense in `[0, n)` and stable for
/// the duration of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub usize);

/// Outcome of a single pairwise equivalence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonResult {
    Same,
    Different,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("ground truth must label at least one element")]
    EmptyTruth,
    #[error("element {0} compared with itself")]
    SelfComparison(usize),
    #[error("ER round uses element {0} in more than one comparison")]
    ErConflict(usize),
    #[error("CR round schedules {pairs} comparisons with only {processors} processors")]
    CrOverBudget { pairs: usize, processors: usize },
}

/// Hidden class labels, one per element. The truth oracle answers from these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<usize>,
}

impl GroundTruth {
    pub fn new(labels: Vec<usize>) -> Result<Self, ModelError> {
        if labels.is_empty() {
            return Err(ModelError::EmptyTruth);
        }
        Ok(Self { labels })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, e: ElementId) -> usize {
        self.labels[e.0]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of distinct classes (`k`).
    pub fn class_count(&self) -> usize {
        let mut distinct: Vec<usize> = self.labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }

    /// Size of the smallest class (`l`).
    pub fn min_class_size(&self) -> usize {
        self.classes().into_iter().map(|c| c.len()).min().unwrap_or(0)
    }

    /// The true classes in canonical order: members ascending, classes sorted
    /// by their smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_label: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::new();
        for (id, &label) in self.labels.iter().enumerate() {
            by_label.entry(label).or_default().push(id);
        }
        let mut classes: Vec<Vec<usize>> = by_label.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        classes
    }
}

/// The pairs compared in one synchronous round.
///
/// Pairs are canonicalized (smaller id first) and deduplicated on
/// construction; a pair of an element with itself is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSchedule {
    pairs: Vec<(ElementId, ElementId)>,
}

impl RoundSchedule {
    pub fn new(
        raw: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<Self, ModelError> {
        let mut seen: FastSet<(usize, usize)> = FastSet::default();
        let mut pairs = Vec::new();
        for (a, b) in raw {
            if a == b {
                return Err(ModelError::SelfComparison(a.0));
            }
            let p = if a.0 < b.0 { (a, b) } else { (b, a) };
            if seen.insert((p.0 .0, p.1 .0)) {
                pairs.push(p);
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(ElementId, ElementId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// True iff no element takes part in more than one comparison of the round.
pub fn validate_er_round(round: &RoundSchedule) -> bool {
    let mut used = FastSet::default();
    used.reserve(round.len() * 2);
    for &(a, b) in round.pairs() {
        if !used.insert(a) || !used.insert(b) {
            return false;
        }
    }
    true
}

/// True iff the round fits in the processor budget (elements may repeat).
pub fn validate_cr_round(round: &RoundSchedule, processors: usize) -> bool {
    round.len() <= processors
}

/// Which legality rule a round is executed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundMode {
    /// Exclusive-read: each element appears in at most one pair per round.
    Er,
    /// Concurrent-read: elements may repeat; at most `processors` pairs.
    Cr { processors: usize },
}

/// Cumulative cost of a run: rounds and total comparisons.
///
/// `total_comparisons` always equals the sum of `per_round_sizes`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunMetrics {
    pub per_round_sizes: Vec<usize>,
    pub total_comparisons: u64,
}

impl RunMetrics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rounds(&self) -> usize {
        self.per_round_sizes.len()
    }

    pub fn record_round(&mut self, size: usize) {
        debug_assert!(size > 0, "zero-comparison steps are not counted");
        self.per_round_sizes.push(size);
        self.total_comparisons += size as u64;
    }

    /// Append another run's accounting (used by retry wrappers).
    pub fn absorb(&mut self, other: &RunMetrics) {
        self.per_round_sizes.extend_from_slice(&other.per_round_sizes);
        self.total_comparisons += other.total_comparisons;
    }
}

/// Answers pairwise equivalence tests. Implementations must stay consistent:
/// the answers given so far are always realizable by at least one labeling.
pub trait Oracle {
    fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult;
}

/// Stateless oracle backed by ground-truth labels.
#[derive(Clone, Debug)]
pub struct TruthOracle {
    labels: Vec<usize>,
}

impl TruthOracle {
    pub fn new(truth: &GroundTruth) -> Self {
        Self { labels: truth.labels().to_vec() }
    }
}

pub fn make_truth_oracle(truth: &GroundTruth) -> TruthOracle {
    TruthOracle::new(truth)
}

impl Oracle for TruthOracle {
    fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
        if self.labels[x.0] == self.labels[y.0] {
            ComparisonResult::Same
        } else {
            ComparisonResult::Different
        }
    }
}

/// Run one round against the oracle, enforcing the mode's legality rule and
/// updating the metrics. An empty round performs no comparisons and is not
/// counted as a step.
pub fn execute_round(
    oracle: &mut dyn Oracle,
    round: &RoundSchedule,
    mode: RoundMode,
    metrics: &mut RunMetrics,
) -> Result<Vec<ComparisonResult>, ModelError> {
    match mode {
        RoundMode::Er => {
            let mut used = FastSet::default();
            used.reserve(round.len() * 2);
            for &(a, b) in round.pairs() {
                for e in [a, b] {
                    if !used.insert(e) {
                        return Err(ModelError::ErConflict(e.0));
                    }
                }
            }
        }
        RoundMode::Cr { processors } => {
            if round.len() > processors {
                return Err(ModelError::CrOverBudget {
                    pairs: round.len(),
                    processors,
                });
            }
        }
    }
    if round.is_empty() {
        return Ok(Vec::new());
    }
    let results = round
        .pairs()
        .iter()
        .map(|&(a, b)| oracle.compare(a, b))
        .collect();
    metrics.record_round(round.len());
    Ok(results)
}
