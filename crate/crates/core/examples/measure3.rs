// Scratch (dev only): constant-round behavior across sizes and adversary
// floors for the three sorters.

use ecs_core::adversary::{AdversaryState, Certification, FloorClaim};
use ecs_core::model::GroundTruth;
use ecs_core::parallel::{cr_sort, er_constant_sort, er_sort, ConstantRoundParams};
use ecs_core::round_robin::round_robin_sort;
use ecs_core::SortOptions;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    println!("== er-constant rounds across sizes (lambda = 1/3, three equal classes) ==");
    let params = ConstantRoundParams::for_lambda(1.0 / 3.0).unwrap();
    println!("  d = {}", params.d);
    for n in [1000usize, 10_000, 100_000] {
        let mut labels: Vec<usize> = (0..n).map(|i| i % 3).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        labels.shuffle(&mut rng);
        let truth = GroundTruth::new(labels).unwrap();
        let mut oracle = ecs_core::make_truth_oracle(&truth);
        let start = std::time::Instant::now();
        let out =
            er_constant_sort(&mut oracle, n, &params, 424242, &SortOptions::default()).unwrap();
        assert_eq!(out.partition.groups(), truth.classes());
        println!(
            "  n={n:7} rounds={} (step2={} step3={} kept={} comp_rounds={:?}) comparisons={} wall={:?}",
            out.metrics.rounds(),
            out.report.step2_rounds,
            out.report.step3_rounds,
            out.report.kept_components,
            out.report.component_rounds,
            out.metrics.total_comparisons,
            start.elapsed(),
        );
    }

    println!("== er-constant rounds, no pruning ==");
    for n in [1000usize, 10_000, 100_000] {
        let mut labels: Vec<usize> = (0..n).map(|i| i % 3).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        labels.shuffle(&mut rng);
        let truth = GroundTruth::new(labels).unwrap();
        let mut oracle = ecs_core::make_truth_oracle(&truth);
        let opts = SortOptions { prune: false, ..Default::default() };
        let out = er_constant_sort(&mut oracle, n, &params, 424242, &opts).unwrap();
        println!(
            "  n={n:7} rounds={} (step2={} step3={} kept={})",
            out.metrics.rounds(),
            out.report.step2_rounds,
            out.report.step3_rounds,
            out.report.kept_components,
        );
    }

    println!("== adversary floors ==");
    for (n, f) in [(64usize, 2usize), (128, 4), (256, 8)] {
        let floor = (n * n / (64 * f)) as u64;
        for algo in ["cr", "er", "round-robin"] {
            let mut adv = AdversaryState::new_uniform(n, f).unwrap();
            let groups = match algo {
                "cr" => {
                    let out = cr_sort(&mut adv, n, &SortOptions::default()).unwrap();
                    out.partition.groups()
                }
                "er" => {
                    let out = er_sort(&mut adv, n, &SortOptions::default()).unwrap();
                    out.partition.groups()
                }
                _ => {
                    let out = round_robin_sort(&mut adv, n).unwrap();
                    out.partition.groups()
                }
            };
            let cert = adv.certify(&FloorClaim::Partition(&groups));
            let inv = adv.check_invariants();
            println!(
                "  n={n:3} f={f} {algo:11} comparisons={:6} floor={floor:5} cert={:?} inv={:?} floor_ok={}",
                adv.comparisons(),
                cert,
                inv.is_ok(),
                adv.comparisons() >= floor,
            );
            assert_eq!(cert, Certification::Accept);
        }
    }
}
