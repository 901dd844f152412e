//! Sequential vs rayon trial loops on the two hottest Monte-Carlo paths.

use acq_core::bandit::{bias_summary, BanditConfig};
use acq_core::oracle::{mc_estimate, DistFamily, EstimatorKind};
use acq_core::par::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const PATHS: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bandit(c: &mut Criterion) {
    let cfg = BanditConfig { trials: 200, ..BanditConfig::default() };
    let mut g = c.benchmark_group("bandit_bias_summary");
    g.sample_size(10);
    for (name, exec) in PATHS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| bias_summary(&cfg, 0.0, 0, exec).unwrap())
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let family = DistFamily::gaussian((0..10).map(|i| 0.1 * i as f64).collect(), vec![1.0; 10], 10).unwrap();
    let mut g = c.benchmark_group("mc_estimate_ac_cde");
    for (name, exec) in PATHS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| mc_estimate(EstimatorKind::AcCde { k: 3 }, &family, 10_000, 0, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bandit, monte_carlo);
criterion_main!(benches);
