//! The algorithm-side knowledge graph: vertices are merged groups of
//! elements discovered equivalent, edges record known non-equivalence.
//! Sorting is complete once the graph is a clique.

use std::collections::HashMap;

use thiserror::Error;

use crate::fast_hash::{FastMap, FastSet};

use crate::model::ComparisonResult;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition requires at least one element")]
    Empty,
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error("element {0} related to itself")]
    SelfPair(usize),
    #[error("oracle contradiction on ({x}, {y}): {reported:?} conflicts with prior knowledge")]
    Contradiction { x: usize, y: usize, reported: ComparisonResult },
}

/// What the knowledge graph entails about a pair of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Known(ComparisonResult),
    Unknown,
}

/// Union-find over elements plus a set of distinct edges between group
/// representatives. Edges are re-hung onto the surviving representative when
/// groups merge, so at most one edge ever joins a pair of groups.
#[derive(Clone, Debug)]
pub struct PartitionState {
    parent: Vec<usize>,
    size: Vec<usize>,
    min_member: Vec<usize>,
    /// Adjacency between group roots; mirrored by `edges` for O(1) probes.
    adj: FastMap<usize, FastSet<usize>>,
    edges: FastSet<(usize, usize)>,
    group_count: usize,
    n: usize,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PartitionState {
    pub fn new(n: usize) -> Result<Self, PartitionError> {
        if n == 0 {
            return Err(PartitionError::Empty);
        }
        Ok(Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            min_member: (0..n).collect(),
            adj: FastMap::default(),
            edges: FastSet::default(),
            group_count: n,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Complete iff every pair of groups is joined by a distinct edge.
    pub fn is_complete(&self) -> bool {
        let g = self.group_count;
        self.edges.len() == g * (g - 1) / 2
    }

    /// Non-compressing root lookup, usable behind a shared reference.
    pub fn root_of(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Smallest element id in `x`'s group.
    pub fn min_of_group(&self, x: usize) -> usize {
        self.min_member[self.root_of(x)]
    }

    pub fn group_size(&self, x: usize) -> usize {
        self.size[self.root_of(x)]
    }

    pub fn has_edge_roots(&self, ra: usize, rb: usize) -> bool {
        self.edges.contains(&edge_key(ra, rb))
    }

    pub fn relation_known(&self, x: usize, y: usize) -> Relation {
        let (rx, ry) = (self.root_of(x), self.root_of(y));
        if rx == ry {
            Relation::Known(ComparisonResult::Same)
        } else if self.has_edge_roots(rx, ry) {
            Relation::Known(ComparisonResult::Different)
        } else {
            Relation::Unknown
        }
    }

    /// Group roots adjacent to root `r` in the distinct-edge graph.
    pub fn neighbors_of_root(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.get(&r).into_iter().flatten().copied()
    }

    /// All distinct edges as canonical root pairs, sorted.
    pub fn distinct_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().copied().collect();
        edges.sort_unstable();
        edges
    }

    /// Fold one comparison outcome into the graph. `Same` contracts the two
    /// groups (incident edges re-hung onto the survivor), `Different` inserts
    /// a distinct edge. A result that conflicts with existing knowledge is an
    /// oracle inconsistency and is reported, never silently accepted.
    pub fn apply_result(
        &mut self,
        x: usize,
        y: usize,
        r: ComparisonResult,
    ) -> Result<(), PartitionError> {
        if x >= self.n {
            return Err(PartitionError::OutOfRange(x));
        }
        if y >= self.n {
            return Err(PartitionError::OutOfRange(y));
        }
        if x == y {
            return Err(PartitionError::SelfPair(x));
        }
        let rx = self.find(x);
        let ry = self.find(y);
        match r {
            ComparisonResult::Same => {
                if rx == ry {
                    return Ok(());
                }
                if self.has_edge_roots(rx, ry) {
                    return Err(PartitionError::Contradiction { x, y, reported: r });
                }
                self.merge_roots(rx, ry);
            }
            ComparisonResult::Different => {
                if rx == ry {
                    return Err(PartitionError::Contradiction { x, y, reported: r });
                }
                if self.edges.insert(edge_key(rx, ry)) {
                    self.adj.entry(rx).or_default().insert(ry);
                    self.adj.entry(ry).or_default().insert(rx);
                }
            }
        }
        Ok(())
    }

    fn merge_roots(&mut self, ra: usize, rb: usize) {
        debug_assert_ne!(ra, rb);
        // Union by size; on ties keep the root with the larger edge list so
        // the smaller list is the one folded over.
        let (winner, loser) = if self.size[ra] > self.size[rb] {
            (ra, rb)
        } else if self.size[rb] > self.size[ra] {
            (rb, ra)
        } else {
            let da = self.adj.get(&ra).map_or(0, |s| s.len());
            let db = self.adj.get(&rb).map_or(0, |s| s.len());
            if da >= db {
                (ra, rb)
            } else {
                (rb, ra)
            }
        };
        self.parent[loser] = winner;
        self.size[winner] += self.size[loser];
        self.min_member[winner] = self.min_member[winner].min(self.min_member[loser]);
        self.group_count -= 1;
        if let Some(loser_adj) = self.adj.remove(&loser) {
            for t in loser_adj {
                debug_assert_ne!(t, winner, "merge across a distinct edge");
                self.edges.remove(&edge_key(loser, t));
                if let Some(ts) = self.adj.get_mut(&t) {
                    ts.remove(&loser);
                }
                if self.edges.insert(edge_key(winner, t)) {
                    self.adj.entry(winner).or_default().insert(t);
                    self.adj.entry(t).or_default().insert(winner);
                }
            }
        }
    }

    /// The current groups in canonical order: members ascending, groups
    /// sorted by their smallest member.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in 0..self.n {
            by_root.entry(self.root_of(e)).or_default().push(e);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}
