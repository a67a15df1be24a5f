//! Node → community assignments and the edge statistics derived from them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A hard partition of a graph's nodes with per-community aggregates.
///
/// Community ids are dense (`0..B`) and every community is non-empty.
/// Internal edge counts include self-loops once; degree sums follow the
/// graph's convention so `Σ_r κ_r = 2m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
    internal_edges: Vec<u64>,
    degree_sums: Vec<u64>,
    #[serde(skip)]
    between: BTreeMap<(usize, usize), u64>,
    edge_total: u64,
}

/// Computes a [`Partition`] for `graph` from per-node community labels.
///
/// Labels may be arbitrary integers; they are compacted to `0..B` preserving
/// their relative order, so an already-dense assignment keeps its ids.
pub fn partition_stats(graph: &Graph, assignment: &[usize]) -> Result<Partition> {
    if assignment.len() != graph.node_count() {
        return Err(Error::AssignmentLength {
            expected: graph.node_count(),
            got: assignment.len(),
        });
    }
    let assignment = compact(assignment);
    let b = assignment.iter().max().map_or(0, |&c| c + 1);

    let mut sizes = vec![0usize; b];
    let mut internal_edges = vec![0u64; b];
    let mut degree_sums = vec![0u64; b];
    let mut between = BTreeMap::new();
    for (node, &c) in assignment.iter().enumerate() {
        sizes[c] += 1;
        degree_sums[c] += graph.degree(node);
    }
    for e in graph.edges() {
        let (r, s) = (assignment[e.u], assignment[e.v]);
        if r == s {
            internal_edges[r] += e.multiplicity;
        } else {
            *between.entry((r.min(s), r.max(s))).or_insert(0) += e.multiplicity;
        }
    }

    let p = Partition {
        assignment,
        sizes,
        internal_edges,
        degree_sums,
        between,
        edge_total: graph.edge_count(),
    };
    debug_assert_eq!(p.degree_sums.iter().sum::<u64>(), 2 * p.edge_total);
    debug_assert_eq!(
        p.internal_edges.iter().sum::<u64>() + p.between.values().sum::<u64>(),
        p.edge_total
    );
    Ok(p)
}

fn compact(labels: &[usize]) -> Vec<usize> {
    let mut distinct = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.last().is_none_or(|&max| max + 1 == distinct.len()) {
        return labels.to_vec();
    }
    labels
        .iter()
        .map(|l| distinct.binary_search(l).expect("label present"))
        .collect()
}

/// Relabels communities densely in order of first appearance over nodes.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

impl Partition {
    /// Every node in its own community.
    pub fn singletons(graph: &Graph) -> Partition {
        partition_stats(graph, &(0..graph.node_count()).collect::<Vec<_>>())
            .expect("length matches")
    }

    /// Every node in community 0.
    pub fn whole(graph: &Graph) -> Partition {
        partition_stats(graph, &vec![0; graph.node_count()]).expect("length matches")
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    /// Number of communities `B`.
    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    /// Total edge count `m` of the graph the partition was computed on.
    pub fn edge_total(&self) -> u64 {
        self.edge_total
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    /// `n_r`
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `m_r`
    pub fn internal_edges(&self) -> &[u64] {
        &self.internal_edges
    }

    /// `κ_r`
    pub fn degree_sums(&self) -> &[u64] {
        &self.degree_sums
    }

    /// `m_rs`, the number of edges between communities `r != s`.
    pub fn between(&self, r: usize, s: usize) -> Result<u64> {
        let b = self.community_count();
        for c in [r, s] {
            if c >= b {
                return Err(Error::CommunityOutOfRange(c));
            }
        }
        if r == s {
            return Err(Error::param("s", "between-community count needs r != s"));
        }
        Ok(self
            .between
            .get(&(r.min(s), r.max(s)))
            .copied()
            .unwrap_or(0))
    }

    /// Non-zero `((r, s), m_rs)` entries with `r < s`, sorted.
    pub fn between_pairs(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.between.iter().map(|(&k, &v)| (k, v))
    }

    /// Node lists per community, each ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::two_triangles;
    use proptest::prelude::*;

    #[test]
    fn triangle_split() {
        let g = two_triangles();
        let p = partition_stats(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(p.internal_edges(), &[3, 3]);
        assert_eq!(p.degree_sums(), &[7, 7]);
        assert_eq!(p.between(0, 1).unwrap(), 1);
        assert_eq!(p.between(1, 0).unwrap(), 1);
        assert_eq!(p.sizes(), &[3, 3]);
    }

    #[test]
    fn single_community() {
        let g = two_triangles();
        let p = Partition::whole(&g);
        assert_eq!(p.internal_edges(), &[7]);
        assert_eq!(p.degree_sums(), &[14]);
    }

    #[test]
    fn sparse_labels_are_compacted_in_order() {
        let g = two_triangles();
        let p = partition_stats(&g, &[9, 9, 4, 4, 100, 100]).unwrap();
        assert_eq!(p.assignment(), &[1, 1, 0, 0, 2, 2]);
        assert_eq!(p.community_count(), 3);
    }

    #[test]
    fn errors() {
        let g = two_triangles();
        assert!(matches!(
            partition_stats(&g, &[0, 0]),
            Err(Error::AssignmentLength {
                expected: 6,
                got: 2
            })
        ));
        let p = Partition::whole(&g);
        assert!(matches!(
            p.between(0, 3),
            Err(Error::CommunityOutOfRange(3))
        ));
        assert!(p.between(0, 0).is_err());
    }

    #[test]
    fn canonical_relabel() {
        assert_eq!(canonical_labels(&[5, 5, 2, 7, 2]), vec![0, 0, 1, 2, 1]);
    }

    proptest! {
        #[test]
        fn edge_and_degree_identities(
            n in 1usize..25,
            raw_edges in proptest::collection::vec((0usize..25, 0usize..25, 1u64..4), 0..80),
            labels in proptest::collection::vec(0usize..6, 25),
        ) {
            let g = Graph::from_edges(n, raw_edges.into_iter().map(|(u, v, w)| (u % n, v % n, w))).unwrap();
            let p = partition_stats(&g, &labels[..n]).unwrap();
            prop_assert_eq!(p.sizes().iter().sum::<usize>(), n);
            prop_assert_eq!(p.degree_sums().iter().sum::<u64>(), 2 * g.edge_count());
            let between: u64 = p.between_pairs().map(|(_, w)| w).sum();
            prop_assert_eq!(p.internal_edges().iter().sum::<u64>() + between, g.edge_count());
            prop_assert!(p.sizes().iter().all(|&s| s > 0));
        }
    }
}
