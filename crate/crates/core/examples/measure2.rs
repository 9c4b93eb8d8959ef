// Scratch (dev only): margins for the dominance params and fit spreads.

use ecs_core::dist::{dominance_bound, realize_labels, sample_ranks, ClassDistribution};
use ecs_core::round_robin::round_robin_sort;

fn main() {
    println!("== dominance margins, candidate params, 200 seeds ==");
    for (dist, label) in [
        (ClassDistribution::Uniform { k: 10 }, "uniform k=10"),
        (ClassDistribution::Geometric { p: 0.9 }, "geom p=0.9"),
        (ClassDistribution::Geometric { p: 0.75 }, "geom p=0.75"),
        (ClassDistribution::Poisson { lambda: 25.0 }, "poisson l=25"),
        (ClassDistribution::Zeta { s: 1.5 }, "zeta s=1.5"),
    ] {
        let mut worst = 0.0f64;
        let mut viol = 0;
        for n in [100usize, 1000, 10000] {
            for seed in 0..200u64 {
                let sample = sample_ranks(&dist, n, 31000 + seed).unwrap();
                let bound = dominance_bound(&sample);
                let truth = realize_labels(&sample);
                let mut oracle = ecs_core::make_truth_oracle(&truth);
                let run = round_robin_sort(&mut oracle, n).unwrap();
                let ratio = run.comparisons as f64 / bound.max(1) as f64;
                worst = worst.max(ratio);
                if run.comparisons > bound {
                    viol += 1;
                }
            }
        }
        println!("  {label:14} worst R/bound = {worst:.4}  viol = {viol}/600");
    }

    println!("== fit spread at 1/10 scale (n = 1000..20000 step 1000, 10 trials) ==");
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
        (ClassDistribution::Zeta { s: 2.0 }, "zeta s=2.0"),
        (ClassDistribution::Zeta { s: 2.5 }, "zeta s=2.5"),
    ] {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for step in 1..=20usize {
            let n = step * 1000;
            for trial in 0..10u64 {
                let seed = 7_000_000 + n as u64 * 1000 + trial;
                let sample = sample_ranks(&dist, n, seed).unwrap();
                let truth = realize_labels(&sample);
                let mut oracle = ecs_core::make_truth_oracle(&truth);
                let run = round_robin_sort(&mut oracle, n).unwrap();
                xs.push(n as f64);
                ys.push(run.comparisons as f64);
            }
        }
        // OLS
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let e = y - (slope * x + intercept);
                e * e
            })
            .sum();
        let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        let r2 = 1.0 - ss_res / ss_tot;
        let spread = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let f = slope * x + intercept;
                ((y - f) / f).abs()
            })
            .fold(0.0f64, f64::max);
        println!("  {label:14} slope={slope:10.2} r2={r2:.5} rel_spread={:.3}%", spread * 100.0);
    }
}
