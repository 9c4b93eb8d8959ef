//! Adaptive adversary oracle that answers equivalence tests while keeping a
//! weighted equitable coloring alive, forcing any sorter to pay quadratic
//! comparison totals before it can be certain of its answer.
//!
//! The adversary mirrors the algorithm's knowledge in its own graph, colors
//! the vertices, and marks elements and colors as their comparison exposure
//! grows. Unmarked vertices always carry weight one, so their colors can
//! still be swapped; an answer is only `Same` once both endpoints are marked
//! and share a color.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ComparisonResult, ElementId, Oracle};
use crate::partition::PartitionState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("uniform-class-size mode requires f to divide n (n={n}, f={f})")]
    NonDivisorF { n: usize, f: usize },
    #[error("smallest-class size must satisfy 1 <= ell <= n/2 (n={n}, ell={ell})")]
    BadEll { n: usize, ell: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryMode {
    /// All classes forced to size `f`; the floor is quadratic over `f`.
    UniformClassSize { f: usize },
    /// A protected smallest class of size `ell`.
    SmallestClass { ell: usize },
}

/// One action taken while answering, kept for trace debugging.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum AdversaryAction {
    MarkElementDegree { element: usize },
    SwapColors { recolored: usize, partner: usize },
    SccProtectionSwap { scc_element: usize, partner: usize },
    MarkColor { color: usize, members: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct AnswerRecord {
    pub x: usize,
    pub y: usize,
    pub result: ComparisonResult,
    pub actions: Vec<AdversaryAction>,
}

#[derive(Clone, Debug)]
pub struct AdversaryAnswer {
    pub result: ComparisonResult,
    pub actions: Vec<AdversaryAction>,
}

/// What an algorithm may claim once it stops.
pub enum FloorClaim<'a> {
    Partition(&'a [Vec<usize>]),
    SmallestClassElement(ElementId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    Accept,
    Mistake,
}

/// Marked-weight tally backing the runtime comparison floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloorAccounting {
    /// Colors marked as having high degree (`i` in the tally).
    pub marked_colors: usize,
    /// Elements marked for element degree only (`j` in the tally).
    pub element_only_marks: usize,
    pub marked_elements: usize,
    pub comparisons: u64,
}

#[derive(Debug)]
pub struct AdversaryState {
    n: usize,
    mode: AdversaryMode,
    /// `f` or `ell`: the divisor in the degree threshold `n / (4 *param)`.
    size_param: usize,
    color_of: Vec<usize>,
    /// Element count per color, fixed at construction (swaps exchange
    /// weight-one vertices; merges stay inside one color).
    color_sizes: Vec<usize>,
    knowledge: PartitionState,
    elem_degree: Vec<u64>,
    elem_degree_mark: Vec<bool>,
    color_degree_mark: Vec<bool>,
    color_marked: Vec<bool>,
    comparisons: u64,
    log: Vec<AnswerRecord>,
    scc_color: Option<usize>,
}

impl AdversaryState {
    /// Equitable coloring with `n/f` colors of weight `f` each.
    pub fn new_uniform(n: usize, f: usize) -> Result<Self, AdversaryError> {
        if f == 0 || n == 0 || n % f != 0 {
            return Err(AdversaryError::NonDivisorF { n, f });
        }
        let colors = n / f;
        let color_of: Vec<usize> = (0..n).map(|e| e % colors).collect();
        Ok(Self {
            n,
            mode: AdversaryMode::UniformClassSize { f },
            size_param: f,
            color_of,
            color_sizes: vec![f; colors],
            knowledge: PartitionState::new(n).expect("n >= 1"),
            elem_degree: vec![0; n],
            elem_degree_mark: vec![false; n],
            color_degree_mark: vec![false; n],
            color_marked: vec![false; colors],
            comparisons: 0,
            log: Vec::new(),
            scc_color: None,
        })
    }

    /// The smallest-class construction: `ell` vertices on a reserved color,
    /// the rest split into `floor((n - ell) / (ell + 1))` colors of near
    /// equal size.
    pub fn new_smallest_class(n: usize, ell: usize) -> Result<Self, AdversaryError> {
        if ell == 0 || 2 * ell > n {
            return Err(AdversaryError::BadEll { n, ell });
        }
        let rest_colors = (((n - ell) / (ell + 1)).max(1)).min(n - ell);
        let mut color_of = vec![0usize; n];
        let mut color_sizes = vec![0usize; 1 + rest_colors];
        color_sizes[0] = ell;
        for (i, slot) in color_of.iter_mut().enumerate().skip(ell) {
            let c = 1 + (i - ell) % rest_colors;
            *slot = c;
            color_sizes[c] += 1;
        }
        Ok(Self {
            n,
            mode: AdversaryMode::SmallestClass { ell },
            size_param: ell,
            color_of,
            color_sizes,
            knowledge: PartitionState::new(n).expect("n >= 1"),
            elem_degree: vec![0; n],
            elem_degree_mark: vec![false; n],
            color_degree_mark: vec![false; n],
            color_marked: vec![false; 1 + rest_colors],
            comparisons: 0,
            log: Vec::new(),
            scc_color: Some(0),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> AdversaryMode {
        self.mode
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    pub fn knowledge(&self) -> &PartitionState {
        &self.knowledge
    }

    pub fn color_of(&self, e: usize) -> usize {
        self.color_of[e]
    }

    pub fn color_count(&self) -> usize {
        self.color_sizes.len()
    }

    pub fn scc_color(&self) -> Option<usize> {
        self.scc_color
    }

    pub fn is_marked(&self, e: usize) -> bool {
        self.elem_degree_mark[e] || self.color_degree_mark[e]
    }

    pub fn color_is_marked(&self, c: usize) -> bool {
        self.color_marked[c]
    }

    pub fn marked_count(&self) -> usize {
        (0..self.n).filter(|&e| self.is_marked(e)).count()
    }

    pub fn action_log(&self) -> &[AnswerRecord] {
        &self.log
    }

    /// Dump the per-answer action log, one JSON object per line.
    pub fn write_action_log_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for record in &self.log {
            serde_json::to_writer(&mut w, record)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// The color classes as element sets, canonical order.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.color_sizes.len()];
        for e in 0..self.n {
            classes[self.color_of[e]].push(e);
        }
        classes.retain(|c| !c.is_empty());
        classes.sort_by_key(|c| c[0]);
        classes
    }

    /// True iff some vertex of `v`'s group has a distinct edge to a vertex
    /// colored `color`.
    fn adjacent_to_color(&self, v: usize, color: usize) -> bool {
        let rv = self.knowledge.root_of(v);
        self.knowledge
            .neighbors_of_root(rv)
            .any(|t| self.color_of[t] == color)
    }

    /// Ascending-id scan for an unmarked weight-one vertex that can trade
    /// colors with `u`: recoloring either side must keep the coloring proper.
    fn swap_candidate(&self, u: usize, exclude: (usize, usize)) -> Option<usize> {
        let cu = self.color_of[u];
        (0..self.n).find(|&z| {
            z != exclude.0
                && z != exclude.1
                && !self.is_marked(z)
                && self.color_of[z] != cu
                && !self.adjacent_to_color(z, cu)
                && !self.adjacent_to_color(u, self.color_of[z])
        })
    }

    fn swap_colors(&mut self, a: usize, b: usize) {
        debug_assert_eq!(self.knowledge.group_size(a), 1);
        debug_assert_eq!(self.knowledge.group_size(b), 1);
        self.color_of.swap(a, b);
    }

    fn mark_color(&mut self, color: usize) -> Vec<usize> {
        self.color_marked[color] = true;
        let mut members = Vec::new();
        for e in 0..self.n {
            if self.color_of[e] == color {
                self.color_degree_mark[e] = true;
                members.push(e);
            }
        }
        members
    }

    /// Answer one equivalence test. Cases run in order: threshold marking,
    /// color swap, color exhaustion, then the color-based answer.
    pub fn answer(&mut self, xi: ElementId, yi: ElementId) -> AdversaryAnswer {
        let (x, y) = (xi.0, yi.0);
        assert!(x != y && x < self.n && y < self.n, "bad query ({x}, {y})");
        let mut actions = Vec::new();

        // Case 1: an unmarked element whose degree is about to cross
        // n / (4 * param) gets a high-element-degree mark. A smallest-class
        // element first tries to hand its reserved color to a swappable
        // unmarked vertex.
        for e in [x.min(y), x.max(y)] {
            if self.is_marked(e) {
                continue;
            }
            if (self.elem_degree[e] + 1) * 4 * self.size_param as u64 > self.n as u64 {
                if self.scc_color.is_some()
                    && Some(self.color_of[e]) == self.scc_color
                    && self.knowledge.group_size(e) == 1
                {
                    if let Some(z) = self.swap_candidate(e, (x, y)) {
                        self.swap_colors(e, z);
                        actions.push(AdversaryAction::SccProtectionSwap {
                            scc_element: e,
                            partner: z,
                        });
                    }
                }
                self.elem_degree_mark[e] = true;
                actions.push(AdversaryAction::MarkElementDegree { element: e });
            }
        }

        // Case 2: same color, not both marked: swap the unmarked side's
        // color with an eligible vertex so the answer can stay Different.
        if self.color_of[x] == self.color_of[y] && !(self.is_marked(x) && self.is_marked(y)) {
            for u in [x.min(y), x.max(y)] {
                if self.is_marked(u) {
                    continue;
                }
                if let Some(z) = self.swap_candidate(u, (x, y)) {
                    self.swap_colors(u, z);
                    actions.push(AdversaryAction::SwapColors { recolored: u, partner: z });
                    break;
                }
            }
        }

        // Case 3: still same color with no swap available: the whole color
        // class is exhausted and gets the high-color-degree mark.
        if self.color_of[x] == self.color_of[y] && !(self.is_marked(x) && self.is_marked(y)) {
            let color = self.color_of[x];
            let members = self.mark_color(color);
            actions.push(AdversaryAction::MarkColor { color, members });
        }

        // Case 4: both marked answer by color; otherwise colors differ now.
        let result = if self.is_marked(x) && self.is_marked(y) {
            if self.color_of[x] == self.color_of[y] {
                ComparisonResult::Same
            } else {
                ComparisonResult::Different
            }
        } else {
            debug_assert_ne!(self.color_of[x], self.color_of[y]);
            ComparisonResult::Different
        };

        if result == ComparisonResult::Different {
            self.elem_degree[x] += 1;
            self.elem_degree[y] += 1;
        }
        self.knowledge
            .apply_result(x, y, result)
            .expect("adversary answers stay consistent");
        self.comparisons += 1;
        self.log.push(AnswerRecord { x, y, result, actions: actions.clone() });
        AdversaryAnswer { result, actions }
    }

    /// Judge a finished algorithm's claim.
    pub fn certify(&self, claim: &FloorClaim) -> Certification {
        match (self.mode, claim) {
            (AdversaryMode::UniformClassSize { .. }, FloorClaim::Partition(groups)) => {
                if (0..self.n).all(|e| self.is_marked(e)) {
                    let mut claimed: Vec<Vec<usize>> =
                        groups.iter().map(|g| {
                            let mut g = g.clone();
                            g.sort_unstable();
                            g
                        }).collect();
                    claimed.sort_by_key(|g| g.first().copied());
                    if claimed == self.color_classes() {
                        return Certification::Accept;
                    }
                }
                Certification::Mistake
            }
            (AdversaryMode::SmallestClass { .. }, FloorClaim::SmallestClassElement(_)) => {
                let scc = self.scc_color.expect("smallest-class mode has an scc color");
                let scc_marked = (0..self.n)
                    .any(|e| self.color_of[e] == scc && self.is_marked(e));
                if !scc_marked && self.marked_count() * 8 < self.n {
                    Certification::Mistake
                } else {
                    Certification::Accept
                }
            }
            // A claim of the wrong shape for the mode is never accepted.
            _ => Certification::Mistake,
        }
    }

    pub fn floor_accounting(&self) -> FloorAccounting {
        let marked_colors = self.color_marked.iter().filter(|&&m| m).count();
        let element_only_marks = (0..self.n)
            .filter(|&e| self.elem_degree_mark[e] && !self.color_degree_mark[e])
            .count();
        FloorAccounting {
            marked_colors,
            element_only_marks,
            marked_elements: self.marked_count(),
            comparisons: self.comparisons,
        }
    }

    /// The marked-weight comparison floor, checkable at runtime. Applies
    /// while at most a quarter of the elements are marked (the tally's own
    /// guard): marked colors were each hit n/2 times, element-degree marks
    /// n/(4*param) times, and every comparison touches at most two marked
    /// parties.
    pub fn floor_bound_holds(&self) -> bool {
        let a = self.floor_accounting();
        if a.marked_elements * 4 > self.n {
            return true;
        }
        let per_color = (self.n as u64) / 2;
        let per_element = (self.n as u64) / (4 * self.size_param as u64);
        2 * a.comparisons
            >= a.marked_colors as u64 * per_color
                + a.element_only_marks as u64 * per_element
    }

    /// Structural invariants: colors are consistent within merged groups,
    /// proper across distinct edges, and each color keeps its construction
    /// weight.
    pub fn check_invariants(&self) -> Result<(), String> {
        for e in 0..self.n {
            let root = self.knowledge.root_of(e);
            if self.color_of[e] != self.color_of[root] {
                return Err(format!(
                    "element {e} color {} disagrees with its group root {root} color {}",
                    self.color_of[e], self.color_of[root]
                ));
            }
        }
        for (a, b) in self.knowledge.distinct_edges() {
            if self.color_of[a] == self.color_of[b] {
                return Err(format!(
                    "distinct edge ({a}, {b}) joins two vertices of color {}",
                    self.color_of[a]
                ));
            }
        }
        let mut sizes = vec![0usize; self.color_sizes.len()];
        for e in 0..self.n {
            sizes[self.color_of[e]] += 1;
        }
        if sizes != self.color_sizes {
            return Err(format!(
                "color weights drifted: {sizes:?} != {:?}",
                self.color_sizes
            ));
        }
        // Unmarked elements always sit in weight-one vertices.
        for e in 0..self.n {
            if !self.is_marked(e) && self.knowledge.group_size(e) != 1 {
                return Err(format!("unmarked element {e} inside a merged vertex"));
            }
        }
        Ok(())
    }
}

impl Oracle for AdversaryState {
    fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
        self.answer(x, y).result
    }
}

/// An oracle wrapper that re-checks the adversary's invariants after every
/// single answer. Test harness support.
pub struct CheckedAdversary {
    pub inner: AdversaryState,
    pub answers_checked: u64,
}

impl CheckedAdversary {
    pub fn new(inner: AdversaryState) -> Self {
        Self { inner, answers_checked: 0 }
    }
}

impl Oracle for CheckedAdversary {
    fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
        let r = self.inner.answer(x, y).result;
        self.answers_checked += 1;
        if let Err(msg) = self.inner.check_invariants() {
            panic!("adversary invariant broken after ({}, {}): {msg}", x.0, y.0);
        }
        assert!(
            self.inner.floor_bound_holds(),
            "marked-weight floor violated after ({}, {})",
            x.0,
            y.0
        );
        r
    }
}

// Exhaustive sweep helper used by tests and the bench harness: answer every
// pair until the knowledge graph is a clique, in ascending pair order.
#[doc(hidden)]
pub fn drive_to_completion(state: &mut AdversaryState) {
    let n = state.n();
    while !state.knowledge().is_complete() {
        let mut progressed = false;
        for x in 0..n {
            for y in (x + 1)..n {
                if state.knowledge().relation_known(x, y)
                    == crate::partition::Relation::Unknown
                {
                    state.answer(ElementId(x), ElementId(y));
                    progressed = true;
                }
            }
        }
        assert!(progressed, "adversary run cannot make progress");
    }
}
