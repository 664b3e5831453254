use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lotkaian_bench::synthetic_bibliography;
use lotkaian_core::{analyze_dataset, AnalysisConfig};

fn analyze(c: &mut Criterion) {
    let ds = synthetic_bibliography(2.0, 1_000, 11);
    let quick = AnalysisConfig { bootstrap_replicas: 0, merge_threshold: None, ..AnalysisConfig::default() };
    c.bench_function("analyze/1k_no_bootstrap", |b| b.iter(|| analyze_dataset(black_box(&ds), &quick)));

    let merging = AnalysisConfig { bootstrap_replicas: 0, ..AnalysisConfig::default() };
    let mut g = c.benchmark_group("analyze_slow");
    g.sample_size(10);
    g.bench_function("1k_with_merge", |b| b.iter(|| analyze_dataset(black_box(&ds), &merging)));
    g.bench_function("1k_full", |b| b.iter(|| analyze_dataset(black_box(&ds), &AnalysisConfig::default())));
    g.finish();
}

criterion_group!(benches, analyze);
criterion_main!(benches);
