//! Ground-truth community files and their alignment with a graph.

use std::collections::HashMap;
use std::path::Path;

use resolv_core::io::{read_communities, read_community_lines};
use resolv_core::NodeLabels;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruthFormat {
    /// `node community` per line.
    #[default]
    Pairs,
    /// One community per line, best first; communities may overlap.
    Lines,
}

/// Reference communities as node-label sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub sets: Vec<Vec<String>>,
    /// Whether the file order ranks the communities.
    pub ranked: bool,
}

impl Reference {
    pub fn load(path: &Path, format: TruthFormat) -> CliResult<Self> {
        match format {
            TruthFormat::Pairs => Ok(Self::from_pairs(&read_communities(path)?)),
            TruthFormat::Lines => Ok(Reference {
                sets: read_community_lines(path)?,
                ranked: true,
            }),
        }
    }

    /// Groups pairs by community in order of first appearance.
    pub fn from_pairs(pairs: &[(String, String)]) -> Self {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut sets: Vec<Vec<String>> = Vec::new();
        for (node, community) in pairs {
            let id = *index.entry(community).or_insert_with(|| {
                sets.push(Vec::new());
                sets.len() - 1
            });
            sets[id].push(node.clone());
        }
        Reference {
            sets,
            ranked: false,
        }
    }

    /// Node label to community index, or `None` when a node is listed twice.
    pub fn membership(&self) -> Option<HashMap<&str, usize>> {
        let mut map = HashMap::new();
        for (c, set) in self.sets.iter().enumerate() {
            for node in set {
                if map.insert(node.as_str(), c).is_some() {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Checks a `--top-k` request against the number of communities and
    /// whether they carry an order.
    pub fn check_top_k(&self, top_k: Option<usize>) -> CliResult<()> {
        let Some(k) = top_k else { return Ok(()) };
        if k == 0 || k > self.sets.len() {
            return Err(CliError::argument(
                "--top-k",
                format!("{k} is outside 1..={}", self.sets.len()),
            ));
        }
        if !self.ranked && k != self.sets.len() {
            return Err(CliError::argument(
                "--top-k",
                "a node-community file carries no ranking, so top-k must cover every community",
            ));
        }
        Ok(())
    }
}

/// Ground truth restricted to the graph nodes that it labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphTruth {
    /// Graph node ids with a truth label, ascending.
    pub nodes: Vec<usize>,
    /// Community index per entry of `nodes`.
    pub labels: Vec<usize>,
    /// Graph nodes without a label plus truth nodes absent from the graph.
    pub dropped_nodes: usize,
    pub communities: usize,
}

impl GraphTruth {
    pub fn align(reference: &Reference, labels: &NodeLabels) -> CliResult<Self> {
        let membership = reference.membership().ok_or_else(|| {
            CliError::argument(
                "--truth",
                "overlapping communities need a disjoint ground truth here",
            )
        })?;
        let mut nodes = Vec::new();
        let mut out = Vec::new();
        for id in 0..labels.len() {
            if let Some(&c) = membership.get(labels.label(id)) {
                nodes.push(id);
                out.push(c);
            }
        }
        let missing_from_graph = membership.len() - nodes.len();
        let dropped_nodes = (labels.len() - nodes.len()) + missing_from_graph;
        if nodes.is_empty() {
            return Err(CliError::argument(
                "--truth",
                "no truth node occurs in the graph",
            ));
        }
        Ok(GraphTruth {
            nodes,
            labels: out,
            dropped_nodes,
            communities: reference.sets.len(),
        })
    }

    /// The entries of a full per-node assignment at the truth nodes.
    pub fn restrict(&self, assignment: &[usize]) -> Vec<usize> {
        self.nodes.iter().map(|&i| assignment[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn groups_in_first_appearance_order() {
        let r = Reference::from_pairs(&pairs(&[("a", "x"), ("b", "y"), ("c", "x")]));
        assert_eq!(r.sets, vec![vec!["a", "c"], vec!["b"]]);
        assert!(!r.ranked);
    }

    #[test]
    fn alignment_counts_dropped_nodes_on_both_sides() {
        let labels = NodeLabels::from_unordered(["1", "2", "3"]);
        let r = Reference::from_pairs(&pairs(&[("1", "a"), ("3", "b"), ("9", "b")]));
        let t = GraphTruth::align(&r, &labels).unwrap();
        assert_eq!(t.nodes, vec![0, 2]);
        assert_eq!(t.labels, vec![0, 1]);
        assert_eq!(t.dropped_nodes, 2);
    }

    #[test]
    fn overlap_is_detected() {
        let r = Reference {
            sets: vec![vec!["a".into(), "b".into()], vec!["b".into()]],
            ranked: true,
        };
        assert!(r.membership().is_none());
        assert!(r.check_top_k(Some(1)).is_ok());
        assert!(r.check_top_k(Some(3)).is_err());
    }

    #[test]
    fn unranked_top_k_must_cover_all() {
        let r = Reference::from_pairs(&pairs(&[("a", "x"), ("b", "y")]));
        assert!(r.check_top_k(Some(1)).is_err());
        assert!(r.check_top_k(Some(2)).is_ok());
        assert!(r.check_top_k(None).is_ok());
    }
}
