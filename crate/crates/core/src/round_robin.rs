//! Sequential round-robin sorter used for the distribution analysis.
//!
//! Elements take turns in ascending id order. On its turn an element acts
//! only if it is its group's designated scanner (the group's smallest id),
//! and initiates exactly one comparison: against the next element in its
//! scan order whose relation to the group is still unknown. Scanners scan
//! downward from their own position, so a sweep over ascending ids lets
//! freshly merged knowledge cascade within a single sweep. The run stops as
//! soon as the knowledge graph is a clique.

use crate::model::{ElementId, Oracle};
use crate::partition::{PartitionError, PartitionState};

#[derive(Debug)]
pub struct RoundRobinRun {
    pub partition: PartitionState,
    /// Total equivalence tests performed (the quantity the dominance bound
    /// upper-bounds). This algorithm is not round-accounted.
    pub comparisons: u64,
}

pub fn round_robin_sort(
    oracle: &mut dyn Oracle,
    n: usize,
) -> Result<RoundRobinRun, PartitionError> {
    let mut state = PartitionState::new(n)?;
    let mut comparisons: u64 = 0;
    // cursor[x] = 1 + id of the next candidate x will consider; 0 = done.
    // Cursors only advance (downward), never reset.
    let mut cursor: Vec<usize> = (0..n).collect();
    let mut active: Vec<usize> = (1..n).collect();

    'run: while !state.is_complete() {
        assert!(
            !active.is_empty(),
            "round-robin stalled with an incomplete knowledge graph"
        );
        let mut still_active = Vec::with_capacity(active.len());
        for &x in &active {
            if state.is_complete() {
                break 'run;
            }
            if state.min_of_group(x) != x {
                continue; // scanning duty passed to a smaller id on merge
            }
            let rx = state.root_of(x);
            let mut c = cursor[x];
            while c > 0 {
                let ry = state.root_of(c - 1);
                if ry == rx || state.has_edge_roots(rx, ry) {
                    c -= 1;
                } else {
                    break;
                }
            }
            if c == 0 {
                cursor[x] = 0; // x's group knows its relation to every smaller id
                continue;
            }
            let y = c - 1;
            let r = oracle.compare(ElementId(x), ElementId(y));
            comparisons += 1;
            state.apply_result(x, y, r)?;
            cursor[x] = c - 1;
            still_active.push(x);
        }
        active = still_active;
    }

    Ok(RoundRobinRun { partition: state, comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_truth_oracle, ComparisonResult, GroundTruth};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Straight-line reimplementation of the same sweep with a dense
    /// relation matrix instead of union-find. Kept deliberately naive; it is
    /// the independent oracle the fast path is checked against.
    fn naive_round_robin(labels: &[usize]) -> (Vec<Vec<usize>>, u64) {
        let n = labels.len();
        // group id per element; merged groups share the smallest member id
        let mut group: Vec<usize> = (0..n).collect();
        // known[a][b]: relation between groups of a and b resolved
        let mut known = vec![vec![false; n]; n];
        let mut cursor: Vec<usize> = (0..n).collect();
        let mut comparisons = 0u64;

        let complete = |group: &[usize], known: &[Vec<bool>]| -> bool {
            for a in 0..n {
                for b in (a + 1)..n {
                    if group[a] != group[b] && !known[a][b] {
                        return false;
                    }
                }
            }
            true
        };

        while !complete(&group, &known) {
            for x in 0..n {
                if complete(&group, &known) {
                    return (collect_groups(&group), comparisons);
                }
                if group[x] != x {
                    continue;
                }
                let mut c = cursor[x];
                while c > 0 {
                    let y = c - 1;
                    if group[y] == group[x] || known[x.min(y)][x.max(y)] {
                        c -= 1;
                    } else {
                        break;
                    }
                }
                cursor[x] = c;
                if c == 0 {
                    continue;
                }
                let y = c - 1;
                comparisons += 1;
                if labels[x] == labels[y] {
                    let (keep, drop) = (group[x].min(group[y]), group[x].max(group[y]));
                    // merge: knowledge of both sides becomes shared
                    for e in 0..n {
                        if group[e] == drop {
                            group[e] = keep;
                        }
                    }
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if known[a][b] {
                                continue;
                            }
                            let (ga, gb) = (group[a], group[b]);
                            // propagate: if any representative pair of the two
                            // groups is known, all member pairs are known
                            if ga != gb && pair_known(&group, &known, ga, gb) {
                                known[a][b] = true;
                            }
                        }
                    }
                } else {
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if group[a] == group[x] && group[b] == group[y]
                                || group[a] == group[y] && group[b] == group[x]
                            {
                                known[a][b] = true;
                            }
                        }
                    }
                }
                cursor[x] = c - 1;
            }
        }
        (collect_groups(&group), comparisons)
    }

    fn pair_known(group: &[usize], known: &[Vec<bool>], ga: usize, gb: usize) -> bool {
        let n = group.len();
        for a in 0..n {
            if group[a] != ga {
                continue;
            }
            for b in 0..n {
                if group[b] != gb {
                    continue;
                }
                if known[a.min(b)][a.max(b)] {
                    return true;
                }
            }
        }
        false
    }

    fn collect_groups(group: &[usize]) -> Vec<Vec<usize>> {
        let n = group.len();
        let mut out: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for e in 0..n {
            out.entry(group[e]).or_default().push(e);
        }
        let mut v: Vec<Vec<usize>> = out.into_values().collect();
        v.sort_by_key(|g| g[0]);
        v
    }

    fn run(labels: &[usize]) -> RoundRobinRun {
        let truth = GroundTruth::new(labels.to_vec()).unwrap();
        let mut oracle = make_truth_oracle(&truth);
        round_robin_sort(&mut oracle, labels.len()).unwrap()
    }

    #[test]
    fn single_element_needs_no_tests() {
        let out = run(&[0]);
        assert_eq!(out.comparisons, 0);
        assert!(out.partition.is_complete());
    }

    #[test]
    fn two_equal_elements_need_one_test() {
        let out = run(&[0, 0]);
        assert_eq!(out.comparisons, 1);
        assert_eq!(out.partition.groups(), vec![vec![0, 1]]);
    }

    #[test]
    fn alternating_labels_match_naive_simulation() {
        let labels = [0, 1, 0, 1, 0, 1];
        let out = run(&labels);
        let (naive_groups, naive_r) = naive_round_robin(&labels);
        assert_eq!(out.comparisons, naive_r);
        assert_eq!(out.partition.groups(), naive_groups);
    }

    #[test]
    fn matches_naive_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..60 {
            let n = rng.gen_range(1..=40);
            let k = rng.gen_range(1..=6.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let out = run(&labels);
            let (naive_groups, naive_r) = naive_round_robin(&labels);
            assert_eq!(out.comparisons, naive_r, "labels {labels:?}");
            assert_eq!(out.partition.groups(), naive_groups, "labels {labels:?}");
        }
    }

    #[test]
    fn recovers_ground_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let n = rng.gen_range(1..=300);
            let k = rng.gen_range(1..=12.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let truth = GroundTruth::new(labels.clone()).unwrap();
            let out = run(&labels);
            assert_eq!(out.partition.groups(), truth.classes());
        }
    }

    /// Every initiated comparison must be between groups whose relation was
    /// unknown; a shadow knowledge graph checks each query as it happens.
    #[test]
    fn no_wasted_tests() {
        struct Shadow {
            labels: Vec<usize>,
            state: PartitionState,
        }
        impl Oracle for Shadow {
            fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
                assert_eq!(
                    self.state.relation_known(x.0, y.0),
                    crate::partition::Relation::Unknown,
                    "wasted test on ({}, {})",
                    x.0,
                    y.0
                );
                let r = if self.labels[x.0] == self.labels[y.0] {
                    ComparisonResult::Same
                } else {
                    ComparisonResult::Different
                };
                self.state.apply_result(x.0, y.0, r).unwrap();
                r
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let n = rng.gen_range(2..=200);
            let k = rng.gen_range(1..=10.min(n));
            let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
            labels.shuffle(&mut rng);
            let mut shadow = Shadow {
                labels: labels.clone(),
                state: PartitionState::new(n).unwrap(),
            };
            round_robin_sort(&mut shadow, n).unwrap();
        }
    }

    /// Determinism: same labels, same count.
    #[test]
    fn comparison_count_is_deterministic() {
        let labels: Vec<usize> = (0..97).map(|i| (i * 7) % 5).collect();
        let a = run(&labels).comparisons;
        let b = run(&labels).comparisons;
        assert_eq!(a, b);
    }
}
