//! Timing targets on a synthetic graph with about one million edges. Run with
//! `cargo test --release -p resolv-bench -- --ignored --nocapture`.

use std::time::Instant;

use resolv_bench::planted_workload;
use resolv_core::{
    louvain_maximize, multiscale_detect, LouvainOptions, MultiscaleOptions, ResolutionParam,
};

const NODES: usize = 200_000;
const BLOCKS: usize = 2_000;
const MEAN_DEGREE: f64 = 10.0;

#[test]
#[ignore = "release-mode timing on a 1M-edge graph"]
fn louvain_pass_on_million_edges() {
    let graph = planted_workload(NODES, BLOCKS, MEAN_DEGREE, 7);
    assert!(graph.edge_count() > 950_000);
    let start = Instant::now();
    let p = louvain_maximize(
        &graph,
        ResolutionParam::default(),
        0,
        &LouvainOptions::default(),
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "louvain: {} edges, {} communities, {elapsed:.2}s",
        graph.edge_count(),
        p.community_count()
    );
    assert!(elapsed < 60.0);
}

#[test]
#[ignore = "release-mode timing on a 1M-edge graph"]
fn multiscale_on_million_edges() {
    let graph = planted_workload(NODES, BLOCKS, MEAN_DEGREE, 7);
    let start = Instant::now();
    let gamma0 = ResolutionParam::new(0.5).unwrap();
    let (p, tree) = multiscale_detect(&graph, gamma0, 0, &MultiscaleOptions::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "multiscale: {} communities, depth {}, {elapsed:.2}s",
        p.community_count(),
        tree.max_depth()
    );
    assert!(elapsed < 600.0);
}
