// Scratch (dev only): time the planned correctness suite across algorithms.

use ecs_core::model::GroundTruth;
use ecs_core::parallel::{cr_sort, er_constant_retry, er_sort};
use ecs_core::round_robin::round_robin_sort;
use ecs_core::SortOptions;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn suite(count: usize, max_n: usize, seed: u64) -> Vec<GroundTruth> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            // log-uniform sizes: plenty of small shapes, some large
            let exp = rng.gen_range(0.0..1.0) * (max_n as f64).ln();
            let n = (exp.exp() as usize).clamp(1, max_n);
            let k = rng.gen_range(1..=20.min(n));
            let mut labels: Vec<usize> = match rng.gen_range(0..4) {
                0 => (0..n).map(|i| i % k).collect(),
                1 => {
                    let mut v = vec![0usize; n];
                    for (c, slot) in v.iter_mut().take(k).enumerate() {
                        *slot = c;
                    }
                    v
                }
                2 => (0..n)
                    .map(|i| {
                        let mut c = 0;
                        let mut span = n.max(2) / 2;
                        let mut off = i;
                        while c + 1 < k && off >= span.max(1) {
                            off -= span.max(1);
                            span /= 2;
                            c += 1;
                        }
                        c
                    })
                    .collect(),
                _ => (0..n).map(|_| rng.gen_range(0..k)).collect(),
            };
            labels.shuffle(&mut rng);
            GroundTruth::new(labels).unwrap()
        })
        .collect()
}

fn main() {
    let instances = suite(200, 2000, 0xC0FFEE);
    let opts = SortOptions::default();
    for algo in ["cr", "er", "er-constant-retry", "round-robin"] {
        let start = std::time::Instant::now();
        let mut total_comp = 0u64;
        for (i, truth) in instances.iter().enumerate() {
            let n = truth.n();
            let mut oracle = ecs_core::make_truth_oracle(truth);
            let groups = match algo {
                "cr" => {
                    let out = cr_sort(&mut oracle, n, &opts).unwrap();
                    total_comp += out.metrics.total_comparisons;
                    out.partition.groups()
                }
                "er" => {
                    let out = er_sort(&mut oracle, n, &opts).unwrap();
                    total_comp += out.metrics.total_comparisons;
                    out.partition.groups()
                }
                "er-constant-retry" => {
                    let out = er_constant_retry(&mut oracle, n, 40 + i as u64, &opts, None)
                        .unwrap();
                    total_comp += out.metrics.total_comparisons;
                    out.partition.groups()
                }
                _ => {
                    let out = round_robin_sort(&mut oracle, n).unwrap();
                    total_comp += out.comparisons;
                    out.partition.groups()
                }
            };
            assert_eq!(groups, truth.classes(), "algo={algo} instance={i}");
        }
        println!(
            "{algo:18} 200 instances: {:?}  total comparisons {total_comp}",
            start.elapsed()
        );
    }
}
