use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use resolv_bench::planted_workload;
use resolv_core::generators::make_plateau_fixture;
use resolv_core::{
    louvain_maximize, multiscale_detect, LouvainOptions, MultiscaleOptions, ResolutionParam,
};

fn louvain(c: &mut Criterion) {
    let mut group = c.benchmark_group("louvain");
    group.sample_size(20);
    let gamma = ResolutionParam::default();
    let (plateau, _) = make_plateau_fixture(0);
    group.bench_function("plateau", |b| {
        b.iter(|| louvain_maximize(black_box(&plateau), gamma, 0, &LouvainOptions::default()))
    });
    for nodes in [2_000usize, 20_000] {
        let graph = planted_workload(nodes, nodes / 50, 10.0, 1);
        group.bench_with_input(BenchmarkId::new("planted", nodes), &graph, |b, g| {
            b.iter(|| louvain_maximize(black_box(g), gamma, 0, &LouvainOptions::default()))
        });
    }
    group.finish();
}

fn multiscale(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiscale");
    group.sample_size(20);
    let gamma0 = ResolutionParam::new(0.5).unwrap();
    let (plateau, _) = make_plateau_fixture(0);
    group.bench_function("plateau", |b| {
        b.iter(|| {
            multiscale_detect(
                black_box(&plateau),
                gamma0,
                0,
                &MultiscaleOptions::default(),
            )
        })
    });
    let graph = planted_workload(5_000, 100, 10.0, 1);
    group.bench_function("planted_5000", |b| {
        b.iter(|| multiscale_detect(black_box(&graph), gamma0, 0, &MultiscaleOptions::default()))
    });
    group.finish();
}

criterion_group!(benches, louvain, multiscale);
criterion_main!(benches);
