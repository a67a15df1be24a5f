//! Bayes posterior odds between a single-community configuration-model null
//! and a planted-partition alternative on a (sub)graph.
//!
//! ```text
//! ln Λ = [a ln(a/b) + (2m − a) ln((2m − a)/(2m − b))] − N [H(n) + H(B)]
//! ```
//!
//! with `a = 2 Σ_r m_r`, `b = Σ_r κ_r² / 2m`, `H(n)` the entropy of the block
//! size distribution and `H(B)` the binary entropy of `B/N`. Everything is
//! computed on the graph passed in, never on an enclosing graph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::resolution::pooled_coefficients;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddsReport {
    pub log_odds: f64,
    /// The likelihood part `a ln(a/b) + (2m − a) ln((2m − a)/(2m − b))`.
    pub log_likelihood_ratio: f64,
    pub a: f64,
    pub b: f64,
    pub entropy_n: f64,
    pub entropy_b: f64,
    pub nodes: usize,
    pub communities: usize,
    pub edges: u64,
    /// `ln Λ > 0`: the split is significant and the subgraph is not accepted
    /// as one community.
    pub significant_split: bool,
}

/// `x ln(x / y)` with `0 ln 0 = 0`.
fn x_ln_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// `−p ln p` with the `0 ln 0 = 0` convention.
fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

pub fn bayes_log_odds(graph: &Graph, partition: &Partition) -> Result<OddsReport> {
    if partition.node_count() != graph.node_count() {
        return Err(Error::AssignmentLength {
            expected: graph.node_count(),
            got: partition.node_count(),
        });
    }
    if partition.edge_total() != graph.edge_count() {
        return Err(Error::param("partition", "computed for a different graph"));
    }
    odds_from_stats(partition)
}

/// The odds from partition aggregates alone.
pub fn odds_from_stats(partition: &Partition) -> Result<OddsReport> {
    let nodes = partition.node_count();
    if nodes == 0 || partition.community_count() == 0 {
        return Err(Error::EmptyNodeSet);
    }
    let m = partition.edge_total();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let (a, b) = pooled_coefficients(partition);
    Ok(odds_from_parts(m, nodes, partition.sizes(), a, b))
}

/// Assembles the report from raw quantities; `sizes` are the block sizes.
pub fn odds_from_parts(m: u64, nodes: usize, sizes: &[usize], a: f64, b: f64) -> OddsReport {
    let two_m = 2.0 * m as f64;
    let log_likelihood_ratio = x_ln_ratio(a, b) + x_ln_ratio(two_m - a, two_m - b);
    let n = nodes as f64;
    let entropy_n: f64 = sizes.iter().map(|&s| plogp(s as f64 / n)).sum();
    let blocks = sizes.len() as f64;
    let entropy_b = plogp(blocks / n) + plogp((n - blocks) / n);
    let log_odds = log_likelihood_ratio - n * (entropy_n + entropy_b);
    OddsReport {
        log_odds,
        log_likelihood_ratio,
        a,
        b,
        entropy_n,
        entropy_b,
        nodes,
        communities: sizes.len(),
        edges: m,
        significant_split: log_odds > 0.0,
    }
}
