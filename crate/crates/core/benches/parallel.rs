//! Sequential vs parallel execution of the three data-parallel workloads.

use apn_core::catalog::fixtures::{g, gold};
use apn_core::extension::{r_extension_search, zero_extensions, SearchConfig};
use apn_core::trim::trim_spectrum;
use apn_core::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn trims(c: &mut Criterion) {
    let f = gold(6, 1).unwrap();
    let mut group = c.benchmark_group("trim_spectrum_x3_n6");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| trim_spectrum(&f, false, exec).unwrap())
        });
    }
    group.finish();
}

fn zero_ext(c: &mut Criterion) {
    let f = g(1).unwrap();
    let mut group = c.benchmark_group("zero_extensions_g1");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| zero_extensions(&f, exec).unwrap())
        });
    }
    group.finish();
}

fn restarts(c: &mut Criterion) {
    let f = gold(5, 1).unwrap();
    let config = SearchConfig { seed: 7, restarts: 8, budget: 50_000, r: None };
    let mut group = c.benchmark_group("r_search_x3_n5");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| r_extension_search(&f, &config, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trims, zero_ext, restarts);
criterion_main!(benches);
