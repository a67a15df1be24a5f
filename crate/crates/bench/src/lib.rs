//! Shared workloads for the benchmarks and the large-graph timing tests.

use resolv_core::generators::{sample_dcsbm, DcsbmParams};
use resolv_core::Graph;

/// A planted-partition DC-SBM graph with `blocks` equal blocks, uniform
/// target degree `mean_degree`, and 80% of each node's edges inside its block.
pub fn planted_workload(nodes: usize, blocks: usize, mean_degree: f64, seed: u64) -> Graph {
    assert!(blocks >= 2 && nodes >= blocks);
    let share = 1.0 / blocks as f64;
    // ω_in·share + ω_out·(1 − share) = 1 keeps realized degrees on target.
    let omega_in = 0.8 / share;
    let omega_out = 0.2 / (1.0 - share);
    let params = DcsbmParams {
        block_assignment: (0..nodes).map(|i| i * blocks / nodes).collect(),
        target_degrees: vec![mean_degree; nodes],
        omega: (0..blocks)
            .map(|r| {
                (0..blocks)
                    .map(|s| if r == s { omega_in } else { omega_out })
                    .collect()
            })
            .collect(),
    };
    sample_dcsbm(&params, seed).expect("valid workload parameters")
}
