//! Union-of-random-Hamiltonian-cycles graphs and strongly connected
//! components, the combinatorial machinery behind the constant-round sorter.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fast_hash::FastSet;

/// The union of `d` random Hamiltonian cycles on `n` vertices. Duplicate
/// arcs across cycles are collapsed, so the arc set is a simple directed
/// graph; the generating cycles are kept for round scheduling.
#[derive(Clone, Debug)]
pub struct CycleUnionGraph {
    n: usize,
    cycles: Vec<Vec<usize>>,
    arcs: Vec<(usize, usize)>,
}

impl CycleUnionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.cycles.len()
    }

    /// The generating permutations; cycle `c` visits `cycles[c][0]`,
    /// `cycles[c][1]`, ..., wrapping back to the start.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Deduplicated directed arcs in generation order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }
}

/// Draw `d` independent uniformly random permutations, each contributing the
/// cycle through its vertices in order. Deterministic under `seed`.
pub fn sample_cycle_union(n: usize, d: usize, seed: u64) -> CycleUnionGraph {
    assert!(n >= 3, "cycle unions need at least 3 vertices");
    assert!(d >= 1, "at least one cycle required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cycles = Vec::with_capacity(d);
    let mut arcs = Vec::new();
    let mut seen: FastSet<(usize, usize)> = FastSet::default();
    for _ in 0..d {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        for i in 0..n {
            let u = perm[i];
            let v = perm[(i + 1) % n];
            if seen.insert((u, v)) {
                arcs.push((u, v));
            }
        }
        cycles.push(perm);
    }
    CycleUnionGraph { n, cycles, arcs }
}

/// Strongly connected components of a directed graph, iteratively (inputs
/// can be large enough to overflow the call stack). Components come out with
/// members sorted; their order follows the underlying DFS.
pub fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0usize;
    let mut frames: Vec<(usize, usize)> = Vec::new(); // (vertex, next edge index)

    for start in 0..n {
        if index[start] != UNSET {
            continue;
        }
        frames.push((start, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, ei) = *frame;
            if ei == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if ei < adj[v].len() {
                frame.1 += 1;
                let w = adj[v][ei];
                if index[w] == UNSET {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    components
}
