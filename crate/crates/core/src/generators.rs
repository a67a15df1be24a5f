//! Seeded random-graph samplers.
//!
//! The degree-corrected stochastic block model places a Poisson number of
//! edges between every node pair, with mean `ω_{g_i g_j} k_i k_j / 2m` for
//! `i != j` and `ω_{g_i g_i} k_i² / 4m` for a self-loop, where `k` are target
//! degrees and `2m = Σ k`. All samplers are pure functions of their
//! parameters and seed.

use rand::distr::weighted::WeightedIndex;
use rand::Rng as _;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{partition_stats, Partition};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcsbmParams {
    pub block_assignment: Vec<usize>,
    pub target_degrees: Vec<f64>,
    /// Symmetric `B×B` density matrix.
    pub omega: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedPpmParams {
    pub community_sizes: Vec<usize>,
    pub target_degrees: Vec<f64>,
    /// Shared off-diagonal density `ω_0`.
    pub omega_out: f64,
    /// Per-community diagonal densities `ω_r`, each strictly above `omega_out`.
    pub omega_diag: Vec<f64>,
}

/// How [`sample_dcsbm_with`] draws edges. Both produce the same distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    /// Draw a Poisson edge total per block pair, then place each edge on
    /// endpoints chosen proportionally to target degree. `O(m + B² + n)`.
    #[default]
    BlockPair,
    /// One Poisson draw per node pair. `O(n²)`; intended for `n <= 2000`.
    Exact,
}

impl DcsbmParams {
    pub fn block_count(&self) -> usize {
        self.omega.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.block_assignment.len();
        if self.target_degrees.len() != n {
            return Err(Error::param(
                "target_degrees",
                format!("{} entries for {n} nodes", self.target_degrees.len()),
            ));
        }
        let b = self.omega.len();
        if let Some(&g) = self.block_assignment.iter().find(|&&g| g >= b) {
            return Err(Error::param(
                "block_assignment",
                format!("block {g} but omega is {b}×{b}"),
            ));
        }
        for (r, row) in self.omega.iter().enumerate() {
            if row.len() != b {
                return Err(Error::param(
                    "omega",
                    format!("row {r} has {} entries, expected {b}", row.len()),
                ));
            }
            for (s, &w) in row.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::param(
                        "omega",
                        format!("entry ({r},{s}) = {w} must be finite and >= 0"),
                    ));
                }
                if w != self.omega[s][r] {
                    return Err(Error::param("omega", format!("not symmetric at ({r},{s})")));
                }
            }
        }
        if let Some((i, k)) = self
            .target_degrees
            .iter()
            .enumerate()
            .find(|(_, k)| !(k.is_finite() && **k > 0.0))
        {
            return Err(Error::param(
                "target_degrees",
                format!("node {i} has degree {k}, must be finite and > 0"),
            ));
        }
        Ok(())
    }
}

impl ExtendedPpmParams {
    pub fn node_count(&self) -> usize {
        self.community_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.community_sizes.is_empty() || self.community_sizes.contains(&0) {
            return Err(Error::param(
                "community_sizes",
                "communities must be non-empty",
            ));
        }
        if self.omega_diag.len() != self.community_sizes.len() {
            return Err(Error::param(
                "omega_diag",
                format!(
                    "{} entries for {} communities",
                    self.omega_diag.len(),
                    self.community_sizes.len()
                ),
            ));
        }
        if !(self.omega_out.is_finite() && self.omega_out >= 0.0) {
            return Err(Error::param("omega_out", "must be finite and >= 0"));
        }
        if let Some((r, w)) = self
            .omega_diag
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w.is_finite() && w > self.omega_out))
        {
            return Err(Error::param(
                "omega_diag",
                format!(
                    "community {r} density {w} must exceed omega_out = {}",
                    self.omega_out
                ),
            ));
        }
        if self.target_degrees.len() != self.node_count() {
            return Err(Error::param(
                "target_degrees",
                format!(
                    "{} entries for {} nodes",
                    self.target_degrees.len(),
                    self.node_count()
                ),
            ));
        }
        Ok(())
    }

    /// Planted block of every node; communities are laid out contiguously.
    pub fn planted_assignment(&self) -> Vec<usize> {
        self.community_sizes
            .iter()
            .enumerate()
            .flat_map(|(r, &n)| std::iter::repeat_n(r, n))
            .collect()
    }

    pub fn to_dcsbm(&self) -> Result<DcsbmParams> {
        self.validate()?;
        let b = self.community_sizes.len();
        let omega = (0..b)
            .map(|r| {
                (0..b)
                    .map(|s| {
                        if r == s {
                            self.omega_diag[r]
                        } else {
                            self.omega_out
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(DcsbmParams {
            block_assignment: self.planted_assignment(),
            target_degrees: self.target_degrees.clone(),
            omega,
        })
    }
}

fn poisson(mean: f64, rng: &mut impl rand::Rng) -> Result<u64> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::param(
            "omega",
            format!("non-finite Poisson mean {mean}"),
        ));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean)
        .map_err(|e| Error::param("omega", format!("Poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}

pub fn sample_dcsbm(params: &DcsbmParams, seed: u64) -> Result<Graph> {
    sample_dcsbm_with(params, seed, SamplingMethod::BlockPair)
}

pub fn sample_dcsbm_with(params: &DcsbmParams, seed: u64, method: SamplingMethod) -> Result<Graph> {
    params.validate()?;
    let n = params.block_assignment.len();
    let two_m: f64 = params.target_degrees.iter().sum();
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    let k = &params.target_degrees;
    let g = &params.block_assignment;

    match method {
        SamplingMethod::Exact => {
            for i in 0..n {
                let loops = poisson(
                    params.omega[g[i]][g[i]] * k[i] * k[i] / (2.0 * two_m),
                    &mut rng,
                )?;
                if loops > 0 {
                    edges.push((i, i, loops));
                }
                for j in i + 1..n {
                    let w = poisson(params.omega[g[i]][g[j]] * k[i] * k[j] / two_m, &mut rng)?;
                    if w > 0 {
                        edges.push((i, j, w));
                    }
                }
            }
        }
        SamplingMethod::BlockPair => {
            let b = params.block_count();
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); b];
            for (i, &r) in g.iter().enumerate() {
                members[r].push(i);
            }
            let kappa: Vec<f64> = members
                .iter()
                .map(|ms| ms.iter().map(|&i| k[i]).sum())
                .collect();
            let pickers: Vec<Option<WeightedIndex<f64>>> = members
                .iter()
                .map(|ms| {
                    if ms.is_empty() {
                        None
                    } else {
                        WeightedIndex::new(ms.iter().map(|&i| k[i])).ok()
                    }
                })
                .collect();
            for r in 0..b {
                for s in r..b {
                    let (Some(pr), Some(ps)) = (&pickers[r], &pickers[s]) else {
                        continue;
                    };
                    let mean = if r == s {
                        params.omega[r][r] * kappa[r] * kappa[r] / (2.0 * two_m)
                    } else {
                        params.omega[r][s] * kappa[r] * kappa[s] / two_m
                    };
                    let count = poisson(mean, &mut rng)?;
                    for _ in 0..count {
                        let i = members[r][pr.sample(&mut rng)];
                        let j = members[s][ps.sample(&mut rng)];
                        edges.push((i, j, 1));
                    }
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Samples an extended planted-partition graph and returns the planted
/// partition alongside it.
pub fn sample_extended_ppm(params: &ExtendedPpmParams, seed: u64) -> Result<(Graph, Partition)> {
    let dcsbm = params.to_dcsbm()?;
    let graph = sample_dcsbm(&dcsbm, seed)?;
    let truth = partition_stats(&graph, &dcsbm.block_assignment)?;
    Ok((graph, truth))
}

/// `m` distinct edges drawn uniformly from the `n(n-1)/2` non-loop pairs.
pub fn sample_er(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > pairs {
        return Err(Error::param(
            "m",
            format!("{m} edges requested but only {pairs} node pairs exist"),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut picked = rand::seq::index::sample(&mut rng, pairs, m).into_vec();
    picked.sort_unstable();

    // Pair index p enumerates (i, j), i < j, row by row.
    let mut edges = Vec::with_capacity(m);
    let mut row = 0usize;
    let mut row_start = 0usize;
    for p in picked {
        while p >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        edges.push((row, row + 1 + (p - row_start)));
    }
    Graph::from_pairs(n, edges)
}

pub fn make_clique(n: usize) -> Graph {
    Graph::from_pairs(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        .expect("ids in range")
}

/// Places graphs side by side; returns the union and each part's id offset.
pub fn disjoint_union(parts: &[&Graph]) -> (Graph, Vec<usize>) {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut n = 0;
    for g in parts {
        offsets.push(n);
        n += g.node_count();
    }
    let edges = parts.iter().zip(&offsets).flat_map(|(g, &off)| {
        g.edges()
            .iter()
            .map(move |e| (e.u + off, e.v + off, e.multiplicity))
    });
    (Graph::from_edges(n, edges).expect("ids in range"), offsets)
}

pub const PLATEAU_RANDOM_NODES: usize = 100;
pub const PLATEAU_RANDOM_EDGES: usize = 956;
pub const PLATEAU_CLIQUE_SIZE: usize = 6;

/// Two 6-cliques and a 100-node, 956-edge random graph, with one bridge
/// between every pair of the three blocks.
///
/// Nodes `0..100` form the random block (community 0), `100..106` and
/// `106..112` the cliques (communities 1 and 2). Bridge endpoints are drawn
/// uniformly inside each block.
pub fn make_plateau_fixture(seed: u64) -> (Graph, Partition) {
    let random = sample_er(PLATEAU_RANDOM_NODES, PLATEAU_RANDOM_EDGES, seed).expect("956 <= 4950");
    let clique = make_clique(PLATEAU_CLIQUE_SIZE);
    let (union, offsets) = disjoint_union(&[&random, &clique, &clique]);
    let sizes = [
        PLATEAU_RANDOM_NODES,
        PLATEAU_CLIQUE_SIZE,
        PLATEAU_CLIQUE_SIZE,
    ];

    let mut rng = rng_from_seed(crate::seed::derive_seed(seed, 0));
    let mut pick = |block: usize| offsets[block] + rng.random_range(0..sizes[block]);
    let bridges = [(0, 1), (0, 2), (1, 2)].map(|(a, b)| (pick(a), pick(b), 1u64));

    let edges = union
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.multiplicity))
        .chain(bridges);
    let graph = Graph::from_edges(union.node_count(), edges).expect("ids in range");
    let truth: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(r, &n)| std::iter::repeat_n(r, n))
        .collect();
    let truth = partition_stats(&graph, &truth).expect("length matches");
    (graph, truth)
}
