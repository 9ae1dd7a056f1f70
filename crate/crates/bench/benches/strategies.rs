use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use coupm::{mine, MinUtil, MiningParams, Strategies};
use coupm_bench::dense_corpus;

fn strategies(c: &mut Criterion) {
    let db = dense_corpus(40, 1000, 0.5);
    let mut group = c.benchmark_group("dense-40x1000");
    group.sample_size(10);
    for min_cor in [0.3, 0.7] {
        for s in Strategies::ALL {
            let params = MiningParams::new(MinUtil::relative(0.25), min_cor).with_strategies(s);
            group.bench_with_input(BenchmarkId::new(s.name(), min_cor), &params, |b, params| {
                b.iter(|| mine(black_box(&db), params).unwrap());
            });
        }
    }
    group.finish();
}

fn threshold_sweep(c: &mut Criterion) {
    let db = dense_corpus(30, 2000, 0.4);
    let mut group = c.benchmark_group("sorted+la-minutil");
    group.sample_size(10);
    for pct in [5u64, 10, 20] {
        let params = MiningParams::new(MinUtil::relative(pct as f64 / 100.0), 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(pct), &params, |b, params| {
            b.iter(|| mine(black_box(&db), params).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, strategies, threshold_sweep);
criterion_main!(benches);
