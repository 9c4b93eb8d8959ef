//! Parallel equivalence-class sorters: answer merging driven by class
//! counts (CR and ER variants) and the constant-round ER sorter driven by
//! the smallest-class fraction.

mod constant;
mod hd;

pub use constant::{
    compute_d, er_constant_retry, er_constant_sort, exact_exponent, quartic_exponent_bound,
    AttemptInfo, ConstantOutcome, ConstantRoundParams, ConstantRoundReport, RetryOutcome,
};
pub use hd::{sample_cycle_union, tarjan_scc, CycleUnionGraph};

use std::collections::{HashMap, VecDeque};

use crate::fast_hash::FastSet;

use thiserror::Error;

use crate::model::{
    execute_round, ComparisonResult, ElementId, ModelError, Oracle, RoundMode, RoundSchedule,
    RunMetrics,
};
use crate::partition::{PartitionError, PartitionState, Relation};

#[derive(Debug, Error)]
pub enum SortError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("lambda must lie in (0, 0.4], got {0}")]
    LambdaOutOfRange(f64),
    #[error("constant-round attempt left the partition incomplete")]
    ConstantRoundIncomplete(Box<IncompleteAttempt>),
    #[error("answers must cover disjoint element sets")]
    OverlappingAnswers,
}

/// Accounting carried by a failed constant-round attempt so callers can
/// still charge its comparisons.
#[derive(Debug)]
pub struct IncompleteAttempt {
    pub metrics: RunMetrics,
    pub schedules: Vec<(RoundMode, RoundSchedule)>,
}

#[derive(Clone, Debug)]
pub struct SortOptions {
    /// Upper bound on the class count, when the caller knows it. Absent, the
    /// schedulers use the class counts discovered so far.
    pub k_hint: Option<usize>,
    /// Drop comparisons made redundant by earlier results in the same merge.
    /// Disable to measure worst-case comparison counts.
    pub prune: bool,
    /// Keep every executed schedule for post-hoc legality checks.
    pub record_schedules: bool,
}

impl Default for SortOptions {
    fn default() -> Self {
        Self { k_hint: None, prune: true, record_schedules: false }
    }
}

#[derive(Debug)]
pub struct SortOutcome {
    pub partition: PartitionState,
    pub metrics: RunMetrics,
    /// Populated only when `record_schedules` was set.
    pub schedules: Vec<(RoundMode, RoundSchedule)>,
}

/// A set of elements whose internal relations are fully resolved: a list of
/// classes, each holding its members in ascending order. The first member of
/// a class is its designated representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    classes: Vec<Vec<usize>>,
}

impl Answer {
    pub fn singleton(e: usize) -> Self {
        Self { classes: vec![vec![e]] }
    }

    pub fn from_classes(mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        Self { classes }
    }

    /// Regroup `elements` by their current knowledge-graph groups.
    pub fn from_partition(state: &PartitionState, elements: &[usize]) -> Self {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        for &e in &sorted {
            by_root.entry(state.root_of(e)).or_default().push(e);
        }
        let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        Self { classes }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().flatten().copied()
    }

    pub fn element_count(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }
}

/// Shared round executor: validates mode legality, feeds results into the
/// knowledge graph, and accumulates metrics (and schedules when recording).
pub(crate) struct Runner<'a> {
    oracle: &'a mut dyn Oracle,
    mode: RoundMode,
    pub(crate) knowledge: PartitionState,
    pub(crate) metrics: RunMetrics,
    schedules: Option<Vec<(RoundMode, RoundSchedule)>>,
}

impl<'a> Runner<'a> {
    pub(crate) fn new(
        oracle: &'a mut dyn Oracle,
        mode: RoundMode,
        n: usize,
        opts: &SortOptions,
    ) -> Result<Self, SortError> {
        Ok(Self {
            oracle,
            mode,
            knowledge: PartitionState::new(n)?,
            metrics: RunMetrics::new(),
            schedules: if opts.record_schedules { Some(Vec::new()) } else { None },
        })
    }

    pub(crate) fn reset_knowledge(&mut self) -> Result<(), SortError> {
        self.knowledge = PartitionState::new(self.knowledge.n())?;
        Ok(())
    }

    /// Execute one round; returns each canonical pair with its result.
    pub(crate) fn execute(
        &mut self,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Vec<((usize, usize), ComparisonResult)>, SortError> {
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        let round = RoundSchedule::new(
            pairs.into_iter().map(|(a, b)| (ElementId(a), ElementId(b))),
        )?;
        let results = execute_round(self.oracle, &round, self.mode, &mut self.metrics)?;
        let mut out = Vec::with_capacity(results.len());
        for (&(a, b), r) in round.pairs().iter().zip(results) {
            self.knowledge.apply_result(a.0, b.0, r)?;
            out.push(((a.0, b.0), r));
        }
        if let Some(log) = &mut self.schedules {
            log.push((self.mode, round));
        }
        Ok(out)
    }

    pub(crate) fn finish(self) -> SortOutcome {
        SortOutcome {
            partition: self.knowledge,
            metrics: self.metrics,
            schedules: self.schedules.unwrap_or_default(),
        }
    }

    pub(crate) fn into_parts(self) -> (RunMetrics, Vec<(RoundMode, RoundSchedule)>) {
        (self.metrics, self.schedules.unwrap_or_default())
    }
}

/// One pairwise answer merge. Classes of the side with fewer classes are
/// scheduled against the other side as a conflict-free tournament: in round
/// `r`, class `i` of the small side meets class `(i + r) mod large` of the
/// large side, so no representative repeats within a round.
struct PairMerge {
    small: Answer,
    large: Answer,
    matched_small: Vec<Option<usize>>,
    matched_large: Vec<Option<usize>>,
}

impl PairMerge {
    fn new(a: Answer, b: Answer) -> Self {
        let (small, large) = if a.class_count() <= b.class_count() { (a, b) } else { (b, a) };
        let (ks, kl) = (small.class_count(), large.class_count());
        Self {
            small,
            large,
            matched_small: vec![None; ks],
            matched_large: vec![None; kl],
        }
    }

    fn rounds(&self) -> usize {
        self.large.class_count()
    }

    fn skip(&self, si: usize, lj: usize, prune: bool) -> bool {
        prune && (self.matched_small[si].is_some() || self.matched_large[lj].is_some())
    }

    /// Pairs for tournament round `r`: ((small class, large class), (reps)).
    fn round_pairs(&self, r: usize, prune: bool) -> Vec<((usize, usize), (usize, usize))> {
        let kl = self.large.class_count();
        (0..self.small.class_count())
            .filter_map(|si| {
                let lj = (si + r) % kl;
                if self.skip(si, lj, prune) {
                    return None;
                }
                Some(((si, lj), (self.small.representative(si), self.large.representative(lj))))
            })
            .collect()
    }

    /// Every cross pair in round-major order (for budgeted CR scheduling).
    fn all_pairs(&self) -> VecDeque<(usize, usize)> {
        let kl = self.large.class_count();
        let mut out = VecDeque::new();
        for r in 0..kl {
            for si in 0..self.small.class_count() {
                out.push_back((si, (si + r) % kl));
            }
        }
        out
    }

    fn reps(&self, si: usize, lj: usize) -> (usize, usize) {
        (self.small.representative(si), self.large.representative(lj))
    }

    fn note_same(&mut self, si: usize, lj: usize) {
        self.matched_small[si] = Some(lj);
        self.matched_large[lj] = Some(si);
    }

    fn merged(self) -> Answer {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut large_classes: Vec<Option<Vec<usize>>> =
            self.large.classes.into_iter().map(Some).collect();
        for (si, class) in self.small.classes.into_iter().enumerate() {
            let mut class = class;
            if let Some(lj) = self.matched_small[si] {
                class.extend(large_classes[lj].take().expect("class matched twice"));
            }
            classes.push(class);
        }
        classes.extend(large_classes.into_iter().flatten());
        Answer::from_classes(classes)
    }
}

fn check_disjoint(a: &Answer, b: &Answer) -> Result<(), SortError> {
    let mut seen: FastSet<usize> = a.elements().collect();
    for e in b.elements() {
        if !seen.insert(e) {
            return Err(SortError::OverlappingAnswers);
        }
    }
    Ok(())
}

/// Which legality regime a standalone answer merge runs under.
#[derive(Clone, Copy, Debug)]
pub enum MergeMode {
    Er,
    Cr { processors: usize },
}

/// Merge two disjoint answers by comparing class representatives, at most
/// `k_a * k_b` comparisons. ER mode schedules the tournament rounds; CR mode
/// packs pairs into rounds of at most `processors` comparisons.
pub fn merge_answers_pair(
    oracle: &mut dyn Oracle,
    a: &Answer,
    b: &Answer,
    mode: MergeMode,
    prune: bool,
    metrics: &mut RunMetrics,
) -> Result<(Answer, Vec<RoundSchedule>), SortError> {
    check_disjoint(a, b)?;
    let round_mode = match mode {
        MergeMode::Er => RoundMode::Er,
        MergeMode::Cr { processors } => RoundMode::Cr { processors },
    };
    let mut merge = PairMerge::new(a.clone(), b.clone());
    let mut schedules = Vec::new();
    match mode {
        MergeMode::Er => {
            for r in 0..merge.rounds() {
                let scheduled = merge.round_pairs(r, prune);
                if scheduled.is_empty() {
                    continue;
                }
                let round = RoundSchedule::new(
                    scheduled.iter().map(|&(_, (x, y))| (ElementId(x), ElementId(y))),
                )?;
                let results = execute_round(oracle, &round, round_mode, metrics)?;
                let mut by_pair: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
                for &((si, lj), (x, y)) in &scheduled {
                    by_pair.insert(canon(x, y), (si, lj));
                }
                for (&(x, y), res) in round.pairs().iter().zip(results) {
                    if res == ComparisonResult::Same {
                        let (si, lj) = by_pair[&(x.0, y.0)];
                        merge.note_same(si, lj);
                    }
                }
                schedules.push(round);
            }
        }
        MergeMode::Cr { processors } => {
            let budget = processors.max(1);
            let mut pending = merge.all_pairs();
            while !pending.is_empty() {
                let mut scheduled = Vec::new();
                while scheduled.len() < budget {
                    match pending.pop_front() {
                        Some((si, lj)) => {
                            if merge.skip(si, lj, prune) {
                                continue;
                            }
                            scheduled.push(((si, lj), merge.reps(si, lj)));
                        }
                        None => break,
                    }
                }
                if scheduled.is_empty() {
                    break;
                }
                let round = RoundSchedule::new(
                    scheduled.iter().map(|&(_, (x, y))| (ElementId(x), ElementId(y))),
                )?;
                let results = execute_round(oracle, &round, round_mode, metrics)?;
                let mut by_pair: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
                for &((si, lj), (x, y)) in &scheduled {
                    by_pair.insert(canon(x, y), (si, lj));
                }
                for (&(x, y), res) in round.pairs().iter().zip(results) {
                    if res == ComparisonResult::Same {
                        let (si, lj) = by_pair[&(x.0, y.0)];
                        merge.note_same(si, lj);
                    }
                }
                schedules.push(round);
            }
        }
    }
    Ok((merge.merged(), schedules))
}

fn canon(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn discovered_k(answers: &[Answer], hint: Option<usize>) -> usize {
    hint.unwrap_or_else(|| answers.iter().map(Answer::class_count).max().unwrap_or(1))
        .max(1)
}

/// Pair the answers up, retaining an odd leftover for the next level.
fn pair_up(answers: Vec<Answer>) -> (Vec<PairMerge>, Option<Answer>) {
    let mut merges = Vec::with_capacity(answers.len() / 2);
    let mut it = answers.into_iter();
    let mut carry = None;
    loop {
        match (it.next(), it.next()) {
            (Some(a), Some(b)) => merges.push(PairMerge::new(a, b)),
            (Some(a), None) => {
                carry = Some(a);
                break;
            }
            _ => break,
        }
    }
    (merges, carry)
}

/// Concurrent-read sorter: two-phase compounding merges with an `n`-processor
/// budget per round. Phase 1 merges answer pairs while processors per answer
/// stay below `4k^2`; phase 2 then merges groups of `c` answers at a time,
/// where `c k^2` is the per-answer processor share.
pub fn cr_sort(
    oracle: &mut dyn Oracle,
    n: usize,
    opts: &SortOptions,
) -> Result<SortOutcome, SortError> {
    let mut runner = Runner::new(oracle, RoundMode::Cr { processors: n }, n, opts)?;
    let mut answers: Vec<Answer> = (0..n).map(Answer::singleton).collect();

    // Phase 1: pairwise merges while answers are processor-starved.
    while answers.len() > 1 {
        let k = discovered_k(&answers, opts.k_hint);
        if n / answers.len() >= 4 * k * k {
            break;
        }
        let (mut merges, carry) = pair_up(answers);
        let mut pendings: Vec<VecDeque<(usize, usize)>> =
            merges.iter().map(PairMerge::all_pairs).collect();
        loop {
            let mut scheduled: Vec<(usize, usize, usize)> = Vec::new(); // (merge, si, lj)
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            'fill: loop {
                let mut progressed = false;
                for (mi, pending) in pendings.iter_mut().enumerate() {
                    while let Some((si, lj)) = pending.pop_front() {
                        if merges[mi].skip(si, lj, opts.prune) {
                            continue;
                        }
                        let (x, y) = merges[mi].reps(si, lj);
                        scheduled.push((mi, si, lj));
                        pairs.push((x, y));
                        progressed = true;
                        break;
                    }
                    if pairs.len() == n {
                        break 'fill;
                    }
                }
                if !progressed {
                    break;
                }
            }
            if pairs.is_empty() {
                break;
            }
            let mut by_pair: HashMap<(usize, usize), (usize, usize, usize)> = HashMap::new();
            for (&(mi, si, lj), &(x, y)) in scheduled.iter().zip(&pairs) {
                by_pair.insert(canon(x, y), (mi, si, lj));
            }
            for ((x, y), res) in runner.execute(pairs)? {
                if res == ComparisonResult::Same {
                    let (mi, si, lj) = by_pair[&(x, y)];
                    merges[mi].note_same(si, lj);
                }
            }
        }
        answers = merges.into_iter().map(PairMerge::merged).collect();
        answers.extend(carry);
    }

    // Phase 2: compound merges of c answers per group.
    while answers.len() > 1 {
        let k = discovered_k(&answers, opts.k_hint);
        let c = (n / (answers.len() * k * k)).max(2).min(answers.len());
        let chunks: Vec<Vec<Answer>> = {
            let mut chunks = Vec::new();
            let mut it = answers.into_iter().peekable();
            while it.peek().is_some() {
                chunks.push(it.by_ref().take(c).collect());
            }
            chunks
        };
        let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
        for chunk in &chunks {
            for ai in 0..chunk.len() {
                for bi in (ai + 1)..chunk.len() {
                    for ci in 0..chunk[ai].class_count() {
                        for cj in 0..chunk[bi].class_count() {
                            pending.push_back((
                                chunk[ai].representative(ci),
                                chunk[bi].representative(cj),
                            ));
                        }
                    }
                }
            }
        }
        while !pending.is_empty() {
            let mut pairs = Vec::new();
            while pairs.len() < n {
                match pending.pop_front() {
                    Some((x, y)) => {
                        if opts.prune
                            && runner.knowledge.relation_known(x, y) != Relation::Unknown
                        {
                            continue;
                        }
                        pairs.push((x, y));
                    }
                    None => break,
                }
            }
            if pairs.is_empty() {
                break;
            }
            runner.execute(pairs)?;
        }
        answers = chunks
            .into_iter()
            .map(|chunk| {
                let elements: Vec<usize> =
                    chunk.iter().flat_map(|a| a.elements()).collect();
                Answer::from_partition(&runner.knowledge, &elements)
            })
            .collect();
    }

    Ok(runner.finish())
}

/// Exclusive-read sorter: a balanced merge tree. All pair merges of a level
/// share rounds (their element sets are disjoint), so a level costs at most
/// `max(k_a, k_b)` rounds and the tree has `ceil(log2 n)` levels.
pub fn er_sort(
    oracle: &mut dyn Oracle,
    n: usize,
    opts: &SortOptions,
) -> Result<SortOutcome, SortError> {
    let mut runner = Runner::new(oracle, RoundMode::Er, n, opts)?;
    let mut answers: Vec<Answer> = (0..n).map(Answer::singleton).collect();

    while answers.len() > 1 {
        let (mut merges, carry) = pair_up(answers);
        let level_rounds = merges.iter().map(PairMerge::rounds).max().unwrap_or(0);
        for r in 0..level_rounds {
            let mut scheduled: Vec<(usize, usize, usize)> = Vec::new();
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for (mi, merge) in merges.iter().enumerate() {
                if r >= merge.rounds() {
                    continue;
                }
                for ((si, lj), (x, y)) in merge.round_pairs(r, opts.prune) {
                    scheduled.push((mi, si, lj));
                    pairs.push((x, y));
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let mut by_pair: HashMap<(usize, usize), (usize, usize, usize)> = HashMap::new();
            for (&(mi, si, lj), &(x, y)) in scheduled.iter().zip(&pairs) {
                by_pair.insert(canon(x, y), (mi, si, lj));
            }
            for ((x, y), res) in runner.execute(pairs)? {
                if res == ComparisonResult::Same {
                    let (mi, si, lj) = by_pair[&(x, y)];
                    merges[mi].note_same(si, lj);
                }
            }
        }
        answers = merges.into_iter().map(PairMerge::merged).collect();
        answers.extend(carry);
    }

    Ok(runner.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_truth_oracle, GroundTruth};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn truth(labels: &[usize]) -> GroundTruth {
        GroundTruth::new(labels.to_vec()).unwrap()
    }

    #[test]
    fn merge_two_singletons_same_class() {
        let t = truth(&[0, 0]);
        let mut oracle = make_truth_oracle(&t);
        let mut metrics = RunMetrics::new();
        let (merged, schedules) = merge_answers_pair(
            &mut oracle,
            &Answer::singleton(0),
            &Answer::singleton(1),
            MergeMode::Er,
            true,
            &mut metrics,
        )
        .unwrap();
        assert_eq!(merged.classes(), &[vec![0, 1]]);
        assert_eq!(metrics.total_comparisons, 1);
        assert_eq!(schedules.len(), 1);
    }

    #[test]
    fn merge_all_distinct_uses_exactly_k_squared() {
        // Two answers of k classes each, all 2k classes distinct.
        let k = 4;
        let a = Answer::from_classes((0..k).map(|i| vec![i]).collect());
        let b = Answer::from_classes((k..2 * k).map(|i| vec![i]).collect());
        let labels: Vec<usize> = (0..2 * k).collect();
        let t = truth(&labels);
        let mut oracle = make_truth_oracle(&t);
        let mut metrics = RunMetrics::new();
        let (merged, _) =
            merge_answers_pair(&mut oracle, &a, &b, MergeMode::Er, true, &mut metrics).unwrap();
        assert_eq!(merged.class_count(), 2 * k);
        assert_eq!(metrics.total_comparisons, (k * k) as u64);
    }

    #[test]
    fn merge_with_shared_classes() {
        // a holds classes {A, B}, b holds {A, C}: three classes come out and
        // at most the four representative tests go in.
        let labels = [0, 1, 0, 2];
        let t = truth(&labels);
        let a = Answer::from_classes(vec![vec![0], vec![1]]);
        let b = Answer::from_classes(vec![vec![2], vec![3]]);
        let mut oracle = make_truth_oracle(&t);
        let mut metrics = RunMetrics::new();
        let (merged, _) =
            merge_answers_pair(&mut oracle, &a, &b, MergeMode::Er, true, &mut metrics).unwrap();
        assert_eq!(merged.class_count(), 3);
        assert!(metrics.total_comparisons <= 4);
        assert_eq!(merged.classes()[0], vec![0, 2]);
    }

    #[test]
    fn merge_rejects_overlap() {
        let t = truth(&[0, 0]);
        let mut oracle = make_truth_oracle(&t);
        let mut metrics = RunMetrics::new();
        let res = merge_answers_pair(
            &mut oracle,
            &Answer::singleton(0),
            &Answer::singleton(0),
            MergeMode::Er,
            true,
            &mut metrics,
        );
        assert!(matches!(res, Err(SortError::OverlappingAnswers)));
    }

    #[test]
    fn merge_never_compares_within_one_answer() {
        // All comparisons must pair one element of a with one of b.
        struct Guard {
            split: usize,
            labels: Vec<usize>,
        }
        impl Oracle for Guard {
            fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
                assert!(
                    (x.0 < self.split) != (y.0 < self.split),
                    "comparison within one answer: {} vs {}",
                    x.0,
                    y.0
                );
                if self.labels[x.0] == self.labels[y.0] {
                    ComparisonResult::Same
                } else {
                    ComparisonResult::Different
                }
            }
        }
        let labels = vec![0, 1, 2, 0, 2, 3];
        let a = Answer::from_classes(vec![vec![0], vec![1], vec![2]]);
        let b = Answer::from_classes(vec![vec![3], vec![4], vec![5]]);
        let mut oracle = Guard { split: 3, labels };
        let mut metrics = RunMetrics::new();
        let (merged, _) =
            merge_answers_pair(&mut oracle, &a, &b, MergeMode::Er, true, &mut metrics).unwrap();
        assert_eq!(merged.class_count(), 4);
        assert!(metrics.total_comparisons <= 9);
    }

    #[test]
    fn cr_sort_single_class_trace() {
        let t = truth(&[5, 5, 5, 5]);
        let mut oracle = make_truth_oracle(&t);
        let out = cr_sort(&mut oracle, 4, &SortOptions::default()).unwrap();
        assert_eq!(out.partition.groups(), t.classes());
        assert!(out.metrics.rounds() <= 3, "rounds = {}", out.metrics.rounds());
    }

    #[test]
    fn cr_sort_trivial_sizes() {
        let t = truth(&[0]);
        let mut oracle = make_truth_oracle(&t);
        let out = cr_sort(&mut oracle, 1, &SortOptions::default()).unwrap();
        assert_eq!(out.metrics.rounds(), 0);
        assert_eq!(out.metrics.total_comparisons, 0);
    }

    #[test]
    fn er_sort_single_class_round_per_level() {
        let t = truth(&[3; 16]);
        let mut oracle = make_truth_oracle(&t);
        let out = er_sort(&mut oracle, 16, &SortOptions::default()).unwrap();
        assert_eq!(out.partition.group_count(), 1);
        // Four merge levels, one round each, one comparison per pair merge.
        assert_eq!(out.metrics.rounds(), 4);
        assert_eq!(out.metrics.total_comparisons, 15);
    }

    #[test]
    fn er_sort_alternating_two_classes() {
        let t = truth(&[0, 1, 0, 1, 0, 1, 0, 1]);
        let mut oracle = make_truth_oracle(&t);
        let out = er_sort(&mut oracle, 8, &SortOptions::default()).unwrap();
        assert_eq!(out.partition.groups(), t.classes());
        assert!(out.metrics.rounds() <= 6, "rounds = {}", out.metrics.rounds());
    }

    #[test]
    fn er_sort_single_element() {
        let t = truth(&[9]);
        let mut oracle = make_truth_oracle(&t);
        let out = er_sort(&mut oracle, 1, &SortOptions::default()).unwrap();
        assert_eq!(out.metrics.rounds(), 0);
    }

    #[test]
    fn both_sorters_recover_random_truths() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabcd);
        for _ in 0..30 {
            let n = rng.gen_range(1..=200);
            let k = rng.gen_range(1..=8.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let t = truth(&labels);
            for prune in [true, false] {
                let opts = SortOptions { prune, ..Default::default() };
                let mut oracle = make_truth_oracle(&t);
                let out = cr_sort(&mut oracle, n, &opts).unwrap();
                assert_eq!(out.partition.groups(), t.classes(), "cr labels {labels:?}");
                let mut oracle = make_truth_oracle(&t);
                let out = er_sort(&mut oracle, n, &opts).unwrap();
                assert_eq!(out.partition.groups(), t.classes(), "er labels {labels:?}");
            }
        }
    }

    #[test]
    fn er_schedules_stay_er_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x77);
        for _ in 0..10 {
            let n = rng.gen_range(2..=120);
            let k = rng.gen_range(1..=10.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let t = truth(&labels);
            let mut oracle = make_truth_oracle(&t);
            let opts = SortOptions { record_schedules: true, ..Default::default() };
            let out = er_sort(&mut oracle, n, &opts).unwrap();
            for (mode, round) in &out.schedules {
                assert_eq!(*mode, RoundMode::Er);
                assert!(crate::model::validate_er_round(round));
            }
            assert_eq!(out.schedules.len(), out.metrics.rounds());
        }
    }

    #[test]
    fn cr_rounds_respect_processor_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x99);
        for _ in 0..10 {
            let n = rng.gen_range(2..=120);
            let k = rng.gen_range(1..=10.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let t = truth(&labels);
            let mut oracle = make_truth_oracle(&t);
            let opts = SortOptions { record_schedules: true, ..Default::default() };
            let out = cr_sort(&mut oracle, n, &opts).unwrap();
            for (mode, round) in &out.schedules {
                assert_eq!(*mode, RoundMode::Cr { processors: n });
                assert!(crate::model::validate_cr_round(round, n));
            }
        }
    }

    #[test]
    fn k_hint_accepted() {
        let t = truth(&[0, 1, 2, 0, 1, 2, 0, 1, 2]);
        let opts = SortOptions { k_hint: Some(3), ..Default::default() };
        let mut oracle = make_truth_oracle(&t);
        let out = cr_sort(&mut oracle, 9, &opts).unwrap();
        assert_eq!(out.partition.groups(), t.classes());
    }
}
