//! Recursive multi-scale detection.
//!
//! Every subgraph (starting with the whole graph) is partitioned by
//! maximizing Q(γ₀) on the subgraph itself. The Bayes odds of that split
//! decide its fate: `ln Λ <= 0` accepts the subgraph as one community,
//! otherwise each block is cut out as an induced subgraph and processed the
//! same way with the same γ₀. Because a subgraph has fewer edges, a fixed γ₀
//! acts like a larger resolution `γ₀ · m / m_sub` on the original graph, so
//! deeper levels resolve finer structure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model_selection::{bayes_log_odds, OddsReport};
use crate::modularity::{louvain_maximize, LouvainOptions, ResolutionParam};
use crate::partition::{partition_stats, Partition};
use crate::resolution::effective_resolution;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct MultiscaleOptions {
    /// Subgraphs deeper than this are accepted as they are and flagged.
    pub max_depth: usize,
    /// Subgraphs with fewer nodes are accepted without testing.
    pub min_size: usize,
    pub louvain: LouvainOptions,
}

impl Default for MultiscaleOptions {
    fn default() -> Self {
        MultiscaleOptions {
            max_depth: 32,
            min_size: 3,
            louvain: LouvainOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafReason {
    /// The maximizer returned a single block.
    SingleBlock,
    /// `ln Λ <= 0`.
    NotSignificant,
    /// Fewer than `min_size` nodes, or no edges.
    TooSmall,
    /// `ln Λ > 0` but the depth cap was reached.
    DepthCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Accepted { reason: LeafReason },
    Recursed,
}

/// One subgraph visited by the recursion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    pub depth: usize,
    pub size: usize,
    pub edges: u64,
    /// `γ₀ · m / m_sub`; absent for edgeless subgraphs.
    pub effective_gamma: Option<f64>,
    /// Odds of the split found on this subgraph, when one was tested.
    pub odds: Option<OddsReport>,
    #[serde(flatten)]
    pub decision: Decision,
    /// Original-graph node ids; only filled on leaves.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.decision, Decision::Accepted { .. })
    }

    pub fn is_capped(&self) -> bool {
        matches!(
            self.decision,
            Decision::Accepted {
                reason: LeafReason::DepthCap
            }
        )
    }

    /// Leaves under this node, left to right.
    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if node.is_leaf() {
                out.push(node);
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        out
    }

    /// Every original node under this subtree, ascending.
    pub fn node_set(&self) -> Vec<usize> {
        let mut nodes: Vec<usize> = self
            .leaves()
            .into_iter()
            .flat_map(|l| l.nodes.iter().copied())
            .collect();
        nodes.sort_unstable();
        nodes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityTree {
    pub gamma0: f64,
    pub seed: u64,
    pub root: TreeNode,
}

impl CommunityTree {
    pub fn leaf_count(&self) -> usize {
        self.root.leaves().len()
    }

    pub fn max_depth(&self) -> usize {
        let mut depth = 0;
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            depth = depth.max(node.depth);
            stack.extend(node.children.iter());
        }
        depth
    }
}

struct Recursion<'a> {
    gamma0: ResolutionParam,
    root_edges: u64,
    options: &'a MultiscaleOptions,
}

impl Recursion<'_> {
    fn visit(
        &self,
        graph: &Graph,
        to_root: Vec<usize>,
        depth: usize,
        seed: u64,
    ) -> Result<TreeNode> {
        let edges = graph.edge_count();
        let mut node = TreeNode {
            depth,
            size: graph.node_count(),
            edges,
            effective_gamma: (edges > 0)
                .then(|| effective_resolution(self.gamma0.value(), self.root_edges, edges)),
            odds: None,
            decision: Decision::Accepted {
                reason: LeafReason::TooSmall,
            },
            nodes: Vec::new(),
            children: Vec::new(),
        };
        if graph.node_count() < self.options.min_size || edges == 0 {
            node.nodes = to_root;
            return Ok(node);
        }

        let split = louvain_maximize(graph, self.gamma0, seed, &self.options.louvain)?;
        if split.community_count() == 1 {
            node.decision = Decision::Accepted {
                reason: LeafReason::SingleBlock,
            };
            node.nodes = to_root;
            return Ok(node);
        }
        let odds = bayes_log_odds(graph, &split)?;
        node.odds = Some(odds);
        if !odds.significant_split || depth >= self.options.max_depth {
            let reason = if odds.significant_split {
                LeafReason::DepthCap
            } else {
                LeafReason::NotSignificant
            };
            node.decision = Decision::Accepted { reason };
            node.nodes = to_root;
            return Ok(node);
        }

        node.decision = Decision::Recursed;
        for (c, members) in split.members().into_iter().enumerate() {
            let sub = graph.induced_subgraph(&members)?;
            let child_to_root = sub.to_parent.iter().map(|&i| to_root[i]).collect();
            let child = self.visit(
                &sub.graph,
                child_to_root,
                depth + 1,
                derive_seed(seed, c as u64),
            )?;
            node.children.push(child);
        }
        Ok(node)
    }
}

/// Runs the recursion on `graph` and returns the leaf partition (leaves
/// numbered left to right) together with the full recursion tree.
///
/// The seed of a child is `derive_seed(parent_seed, block_index)`, so the
/// result does not depend on the order in which siblings are processed.
pub fn multiscale_detect(
    graph: &Graph,
    gamma0: ResolutionParam,
    seed: u64,
    options: &MultiscaleOptions,
) -> Result<(Partition, CommunityTree)> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if options.min_size == 0 {
        return Err(Error::param("min_size", "must be at least 1"));
    }
    let recursion = Recursion {
        gamma0,
        root_edges: graph.edge_count(),
        options,
    };
    let root = recursion.visit(graph, (0..graph.node_count()).collect(), 0, seed)?;

    let mut assignment = vec![usize::MAX; graph.node_count()];
    for (c, leaf) in root.leaves().into_iter().enumerate() {
        for &i in &leaf.nodes {
            assignment[i] = c;
        }
    }
    debug_assert!(assignment.iter().all(|&c| c != usize::MAX));
    let partition = partition_stats(graph, &assignment)?;
    Ok((
        partition,
        CommunityTree {
            gamma0: gamma0.value(),
            seed,
            root,
        },
    ))
}
