use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use vbm::graph::build_connectivity;
use vbm::graph::detect_particular_points;
use vbm::{
    analyze_topology, compute_all, optimized_multifractal, skeletonize, ArmMode, MultifractalConfig, NetworkKind,
    PipelineConfig,
};
use vbm_bench::tree_mask;

fn stages(c: &mut Criterion) {
    let mut g = c.benchmark_group("stages");
    for side in [256, 512] {
        let mask = tree_mask(side, 1);
        let skel = skeletonize(&mask);
        g.bench_with_input(BenchmarkId::new("skeletonize", side), &mask, |b, m| {
            b.iter(|| skeletonize(black_box(m)))
        });
        g.bench_with_input(BenchmarkId::new("graph", side), &skel, |b, s| {
            b.iter(|| build_connectivity(s, &detect_particular_points(black_box(s))))
        });
        g.bench_with_input(BenchmarkId::new("topology", side), &skel, |b, s| {
            b.iter(|| analyze_topology(black_box(s), ArmMode::default()))
        });
        g.bench_with_input(BenchmarkId::new("multifractal", side), &mask, |b, m| {
            b.iter(|| optimized_multifractal(black_box(m), &MultifractalConfig::default(), 3))
        });
    }
    g.finish();
}

fn full_report(c: &mut Criterion) {
    let mask = tree_mask(1440, 2);
    let cfg = PipelineConfig::default();
    let mut g = c.benchmark_group("report");
    g.sample_size(10);
    g.bench_function("compute_all_1440", |b| {
        b.iter(|| compute_all("bench", black_box(&mask), NetworkKind::Arterioles, &cfg, 9))
    });
    g.finish();
}

criterion_group!(benches, stages, full_report);
criterion_main!(benches);
