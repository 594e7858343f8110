use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lintomo_bench::{directions, exact_sums, float_sums};
use lintomo_core::{reconstruct_with, ReconstructOptions};

fn opts(stream: bool) -> ReconstructOptions {
    ReconstructOptions { check_safety: false, use_stream_order: stream, trace: false }
}

fn scaling_m(c: &mut Criterion) {
    let dirs = directions(3);
    let mut group = c.benchmark_group("reconstruct_m");
    for m in [64, 128, 256, 512] {
        let sums = float_sums(m, 64, &dirs, 1);
        group.bench_with_input(BenchmarkId::from_parameter(m), &sums, |b, s| {
            b.iter(|| reconstruct_with(black_box(s), &BTreeMap::new(), opts(false)).unwrap())
        });
    }
    group.finish();
}

fn scaling_d(c: &mut Criterion) {
    let mut group = c.benchmark_group("reconstruct_d");
    for d in 3..=8 {
        let sums = float_sums(128, 128, &directions(d), 1);
        group.bench_with_input(BenchmarkId::from_parameter(d), &sums, |b, s| {
            b.iter(|| reconstruct_with(black_box(s), &BTreeMap::new(), opts(false)).unwrap())
        });
    }
    group.finish();
}

fn order_strategy(c: &mut Criterion) {
    // Long thin grid: few starting points per column, many columns.
    let dirs = directions(8);
    let sums = float_sums(16, 4096, &dirs, 2);
    let mut group = c.benchmark_group("order");
    for (name, stream) in [("sorted", false), ("stream", true)] {
        group.bench_function(name, |b| b.iter(|| reconstruct_with(black_box(&sums), &BTreeMap::new(), opts(stream)).unwrap()));
    }
    group.finish();
}

fn exact_arithmetic(c: &mut Criterion) {
    let sums = exact_sums(64, 64, &directions(4), 3);
    c.bench_function("reconstruct_exact_64x64", |b| {
        b.iter(|| reconstruct_with(black_box(&sums), &BTreeMap::new(), opts(false)).unwrap())
    });
}

criterion_group!(benches, scaling_m, scaling_d, order_strategy, exact_arithmetic);
criterion_main!(benches);
