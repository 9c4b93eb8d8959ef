// Scratch measurement harness (dev only): stress the round-robin scan rule
// against the per-pair cross-class budget and the rank-sum dominance bound.

use std::collections::HashMap;

use ecs_core::dist::{dominance_bound, realize_labels, sample_ranks, ClassDistribution};
use ecs_core::model::{ComparisonResult, ElementId, GroundTruth, Oracle};
use ecs_core::round_robin::round_robin_sort;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct CountingOracle {
    labels: Vec<usize>,
    pair_counts: HashMap<(usize, usize), u64>,
}

impl Oracle for CountingOracle {
    fn compare(&mut self, x: ElementId, y: ElementId) -> ComparisonResult {
        let (a, b) = (self.labels[x.0], self.labels[y.0]);
        let key = (a.min(b), a.max(b));
        *self.pair_counts.entry(key).or_insert(0) += 1;
        if a == b {
            ComparisonResult::Same
        } else {
            ComparisonResult::Different
        }
    }
}

fn check_pairs(labels: &[usize]) -> (bool, f64, u64) {
    let n = labels.len();
    let mut sizes: HashMap<usize, u64> = HashMap::new();
    for &l in labels {
        *sizes.entry(l).or_insert(0) += 1;
    }
    let mut oracle = CountingOracle { labels: labels.to_vec(), pair_counts: HashMap::new() };
    let run = round_robin_sort(&mut oracle, n).unwrap();
    let mut ok = true;
    let mut worst = 0.0f64;
    for (&(a, b), &count) in &oracle.pair_counts {
        if a == b {
            continue;
        }
        let bound = 2 * sizes[&a].min(sizes[&b]);
        let ratio = count as f64 / bound as f64;
        worst = worst.max(ratio);
        if count > bound {
            ok = false;
        }
    }
    (ok, worst, run.comparisons)
}

fn main() {
    // 1) exhaustive small instances over 3 labels
    println!("== exhaustive n<=8 over 3 labels ==");
    let mut viol = 0u64;
    let mut total = 0u64;
    let mut worst = 0.0f64;
    for n in 2..=8usize {
        let mut labels = vec![0usize; n];
        loop {
            total += 1;
            let (ok, w, _) = check_pairs(&labels);
            worst = worst.max(w);
            if !ok {
                viol += 1;
                if viol <= 10 {
                    println!("  VIOLATION: {labels:?} worst={w:.3}");
                }
            }
            // next vector
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                labels[i] += 1;
                if labels[i] < 3 {
                    break;
                }
                labels[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    println!("  checked {total} instances, {viol} violations, worst ratio {worst:.3}");

    // 2) random mixed profiles
    println!("== random mixed profiles ==");
    let mut rng = ChaCha8Rng::seed_from_u64(0xdead);
    let mut viol = 0u64;
    let mut worst = 0.0f64;
    for trial in 0..400 {
        let n = rng.gen_range(2..=1500);
        let k = rng.gen_range(1..=20.min(n));
        let profile = rng.gen_range(0..4);
        let mut labels: Vec<usize> = match profile {
            0 => (0..n).map(|i| i % k).collect(),
            1 => {
                // one big class plus singletons
                let mut v = vec![0usize; n];
                for (c, slot) in v.iter_mut().take(k.min(n)).enumerate() {
                    *slot = c;
                }
                v
            }
            2 => {
                // geometric-ish sizes
                (0..n).map(|i| {
                    let mut c = 0usize;
                    let mut t = i;
                    while t >= 1 && c + 1 < k {
                        t /= 2;
                        c += 1;
                        if t == 0 { break; }
                    }
                    c % k
                }).collect()
            }
            _ => (0..n).map(|_| rng.gen_range(0..k)).collect(),
        };
        labels.shuffle(&mut rng);
        let (ok, w, _) = check_pairs(&labels);
        worst = worst.max(w);
        if !ok {
            viol += 1;
            if viol <= 5 {
                println!("  VIOLATION trial={trial} n={n} k={k} profile={profile} worst={w:.3}");
            }
        }
    }
    println!("  400 random instances, {viol} violations, worst ratio {worst:.3}");

    // 3) dominance bound across distributions
    println!("== dominance R <= 2*sum(V) ==");
    for (dist, label) in [
        (ClassDistribution::Uniform { k: 10 }, "uniform k=10"),
        (ClassDistribution::Uniform { k: 25 }, "uniform k=25"),
        (ClassDistribution::Uniform { k: 100 }, "uniform k=100"),
        (ClassDistribution::Geometric { p: 0.5 }, "geom p=0.5"),
        (ClassDistribution::Geometric { p: 0.1 }, "geom p=0.1"),
        (ClassDistribution::Geometric { p: 0.02 }, "geom p=0.02"),
        (ClassDistribution::Poisson { lambda: 1.0 }, "poisson l=1"),
        (ClassDistribution::Poisson { lambda: 5.0 }, "poisson l=5"),
        (ClassDistribution::Poisson { lambda: 25.0 }, "poisson l=25"),
        (ClassDistribution::Zeta { s: 1.5 }, "zeta s=1.5"),
        (ClassDistribution::Zeta { s: 2.0 }, "zeta s=2.0"),
        (ClassDistribution::Zeta { s: 2.5 }, "zeta s=2.5"),
    ] {
        let mut worst_ratio = 0.0f64;
        let mut viol = 0u64;
        for n in [100usize, 1000, 10000] {
            for seed in 0..50u64 {
                let sample = sample_ranks(&dist, n, 1000 + seed).unwrap();
                let bound = dominance_bound(&sample);
                let truth: GroundTruth = realize_labels(&sample);
                let mut oracle = ecs_core::make_truth_oracle(&truth);
                let run = round_robin_sort(&mut oracle, n).unwrap();
                let ratio = if bound == 0 {
                    if run.comparisons == 0 { 0.0 } else { f64::INFINITY }
                } else {
                    run.comparisons as f64 / bound as f64
                };
                worst_ratio = worst_ratio.max(ratio);
                if run.comparisons > bound {
                    viol += 1;
                }
            }
        }
        println!("  {label:16} worst R/bound = {worst_ratio:.4}  violations = {viol}/150");
    }
}
