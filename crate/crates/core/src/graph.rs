//! Undirected multigraph with integer edge multiplicities and self-loops.
//!
//! Conventions used everywhere in the crate:
//!
//! * an edge `(u, v)` with multiplicity `w` contributes `w` to `m` and `w` to
//!   each endpoint's degree;
//! * a self-loop `(u, u)` with multiplicity `w` contributes `w` to `m` and
//!   `2w` to the degree of `u`.
//!
//! Hence `Σ_i k_i = 2m` holds exactly.

use crate::error::{Error, Result};

/// One canonical edge entry, `u <= v`, `multiplicity >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub multiplicity: u64,
}

/// Immutable multigraph on nodes `0..n`.
///
/// Besides the canonical sorted edge list the graph keeps a CSR adjacency
/// (self-loops excluded) for the hot loops in the maximizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    degrees: Vec<u64>,
    self_loops: Vec<u64>,
    m: u64,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<u64>,
}

impl Graph {
    /// Builds a graph from `(u, v, multiplicity)` triples.
    ///
    /// `(u, v)` and `(v, u)` are identified and repeated pairs accumulate
    /// multiplicity. Zero multiplicities are ignored.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut raw: Vec<Edge> = Vec::new();
        for (u, v, w) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if w == 0 {
                continue;
            }
            let (u, v) = if u <= v { (u, v) } else { (v, u) };
            raw.push(Edge {
                u,
                v,
                multiplicity: w,
            });
        }
        raw.sort_unstable_by_key(|e| (e.u, e.v));

        let mut edges: Vec<Edge> = Vec::with_capacity(raw.len());
        for e in raw {
            match edges.last_mut() {
                Some(last) if last.u == e.u && last.v == e.v => last.multiplicity += e.multiplicity,
                _ => edges.push(e),
            }
        }
        Ok(Self::from_canonical(n, edges))
    }

    /// Convenience constructor for simple graphs given as node pairs.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    fn from_canonical(n: usize, edges: Vec<Edge>) -> Self {
        let mut degrees = vec![0u64; n];
        let mut self_loops = vec![0u64; n];
        let mut counts = vec![0usize; n + 1];
        let mut m = 0u64;
        for e in &edges {
            m += e.multiplicity;
            if e.u == e.v {
                degrees[e.u] += 2 * e.multiplicity;
                self_loops[e.u] += e.multiplicity;
            } else {
                degrees[e.u] += e.multiplicity;
                degrees[e.v] += e.multiplicity;
                counts[e.u + 1] += 1;
                counts[e.v + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        let mut weights = vec![0u64; offsets[n]];
        for e in edges.iter().filter(|e| e.u != e.v) {
            targets[cursor[e.u]] = e.v;
            weights[cursor[e.u]] = e.multiplicity;
            cursor[e.u] += 1;
            targets[cursor[e.v]] = e.u;
            weights[cursor[e.v]] = e.multiplicity;
            cursor[e.v] += 1;
        }
        Graph {
            n,
            edges,
            degrees,
            self_loops,
            m,
            offsets,
            targets,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Total edge count `m`, multiplicities included.
    pub fn edge_count(&self) -> u64 {
        self.m
    }

    /// Canonical edges, sorted by `(u, v)` with `u <= v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> u64 {
        self.degrees[node]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Self-loop multiplicity at `node`.
    pub fn self_loops(&self, node: usize) -> u64 {
        self.self_loops[node]
    }

    /// Multiplicity of the edge `{u, v}`, zero if absent.
    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        if u == v {
            return self.self_loops[u];
        }
        self.neighbors(u)
            .find(|&(t, _)| t == v)
            .map_or(0, |(_, w)| w)
    }

    /// Distinct non-loop neighbours of `node` with their multiplicities.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// CSR adjacency `(offsets, targets, weights)` without self-loops.
    pub(crate) fn csr(&self) -> (&[usize], &[usize], &[u64]) {
        (&self.offsets, &self.targets, &self.weights)
    }

    pub(crate) fn self_loop_counts(&self) -> &[u64] {
        &self.self_loops
    }

    /// Subgraph induced by `nodes`. Edges with one endpoint outside the set are
    /// dropped, so degrees are recomputed inside the subgraph.
    ///
    /// New ids follow the ascending order of the selected parent ids.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Subgraph> {
        if nodes.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let mut to_parent = nodes.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        if let Some(&max) = to_parent.last() {
            if max >= self.n {
                return Err(Error::NodeOutOfRange {
                    node: max,
                    n: self.n,
                });
            }
        }
        let mut local = vec![usize::MAX; self.n];
        for (new, &old) in to_parent.iter().enumerate() {
            local[old] = new;
        }

        let mut edges = Vec::new();
        for (new_u, &old_u) in to_parent.iter().enumerate() {
            if self.self_loops[old_u] > 0 {
                edges.push(Edge {
                    u: new_u,
                    v: new_u,
                    multiplicity: self.self_loops[old_u],
                });
            }
            for (old_v, w) in self.neighbors(old_u) {
                let new_v = local[old_v];
                if new_v != usize::MAX && new_u < new_v {
                    edges.push(Edge {
                        u: new_u,
                        v: new_v,
                        multiplicity: w,
                    });
                }
            }
        }
        edges.sort_unstable_by_key(|e| (e.u, e.v));
        Ok(Subgraph {
            graph: Self::from_canonical(to_parent.len(), edges),
            to_parent,
        })
    }
}

/// An induced subgraph together with its id mapping back to the parent.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// `to_parent[new_id] = parent_id`, ascending.
    pub to_parent: Vec<usize>,
}

impl Subgraph {
    /// Parent id → subgraph id, if the parent node was selected.
    pub fn local_id(&self, parent: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }
}
