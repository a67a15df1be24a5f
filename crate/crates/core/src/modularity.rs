//! Generalized modularity
//!
//! ```text
//! Q(γ) = Σ_r [ m_r / m − γ (κ_r / 2m)² ]
//! ```
//!
//! and its maximization with a Louvain-style local-moving and aggregation
//! heuristic.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{canonical_labels, partition_stats, Partition};
use crate::seed::{derive_seed, rng_from_seed, Rng};

/// Resolution parameter γ: positive and finite. `1.0` gives Newman–Girvan
/// modularity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ResolutionParam(f64);

impl ResolutionParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(ResolutionParam(gamma))
        } else {
            Err(Error::param(
                "gamma",
                format!("{gamma} must be finite and > 0"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for ResolutionParam {
    fn default() -> Self {
        ResolutionParam(1.0)
    }
}

impl TryFrom<f64> for ResolutionParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ResolutionParam> for f64 {
    fn from(value: ResolutionParam) -> f64 {
        value.0
    }
}

fn check_consistent(graph: &Graph, partition: &Partition) -> Result<()> {
    if partition.node_count() != graph.node_count() {
        return Err(Error::AssignmentLength {
            expected: graph.node_count(),
            got: partition.node_count(),
        });
    }
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if partition.edge_total() != graph.edge_count() {
        return Err(Error::param(
            "partition",
            "computed for a graph with a different edge count",
        ));
    }
    Ok(())
}

pub fn modularity(graph: &Graph, partition: &Partition, gamma: ResolutionParam) -> Result<f64> {
    check_consistent(graph, partition)?;
    Ok(modularity_of_stats(partition, gamma))
}

/// Q(γ) from a partition's own aggregates.
pub fn modularity_of_stats(partition: &Partition, gamma: ResolutionParam) -> f64 {
    let m = partition.edge_total() as f64;
    partition
        .internal_edges()
        .iter()
        .zip(partition.degree_sums())
        .map(|(&mr, &kr)| {
            let share = kr as f64 / (2.0 * m);
            mr as f64 / m - gamma.0 * share * share
        })
        .sum()
}

/// Change in Q(γ) from merging communities `r` and `s`:
/// `m_rs / m − γ κ_r κ_s / 2m²`.
pub fn delta_merge(
    partition: &Partition,
    r: usize,
    s: usize,
    gamma: ResolutionParam,
) -> Result<f64> {
    let m_rs = partition.between(r, s)? as f64;
    let m = partition.edge_total() as f64;
    if m == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let (kr, ks) = (
        partition.degree_sums()[r] as f64,
        partition.degree_sums()[s] as f64,
    );
    Ok(m_rs / m - gamma.0 * kr * ks / (2.0 * m * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LouvainOptions {
    /// A move must raise Q(γ) by more than this to be taken.
    pub tolerance: f64,
    /// Cap on local-moving sweeps per level.
    pub max_sweeps: usize,
    /// Cap on refinement rounds (each round: one base pass plus aggregation).
    pub max_rounds: usize,
    /// Independent runs; the highest-Q result is kept. Run 0 uses the given
    /// seed, run `r > 0` uses `derive_seed(seed, r)`.
    pub restarts: usize,
    /// Graphs with at most this many nodes get a Kernighan-Lin style pass
    /// (tentative moves, best prefix kept) whenever local moving stalls. Each
    /// pass costs `O(n · m)`; 0 disables it.
    pub fine_tune_max_nodes: usize,
}

impl Default for LouvainOptions {
    fn default() -> Self {
        LouvainOptions {
            tolerance: 1e-12,
            max_sweeps: 10_000,
            max_rounds: 100,
            restarts: 1,
            fine_tune_max_nodes: 2_000,
        }
    }
}

/// Working graph for one aggregation level.
struct Level {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<u64>,
    self_loops: Vec<u64>,
    degrees: Vec<u64>,
}

impl Level {
    fn from_graph(graph: &Graph) -> Level {
        let (offsets, targets, weights) = graph.csr();
        Level {
            offsets: offsets.to_vec(),
            targets: targets.to_vec(),
            weights: weights.to_vec(),
            self_loops: graph.self_loop_counts().to_vec(),
            degrees: graph.degrees().to_vec(),
        }
    }

    fn len(&self) -> usize {
        self.degrees.len()
    }

    fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Collapses each community (dense labels `0..count`) into one node;
    /// internal edges become self-loops.
    fn aggregate(&self, labels: &[usize], count: usize) -> Level {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (node, &c) in labels.iter().enumerate() {
            members[c].push(node);
        }
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut self_loops = vec![0u64; count];
        let mut degrees = vec![0u64; count];
        let mut acc = vec![0u64; count];
        let mut touched = Vec::new();
        for (c, nodes) in members.iter().enumerate() {
            let mut internal_twice = 0u64;
            for &u in nodes {
                self_loops[c] += self.self_loops[u];
                degrees[c] += self.degrees[u];
                for (v, w) in self.neighbors(u) {
                    let cv = labels[v];
                    if cv == c {
                        internal_twice += w;
                    } else {
                        if acc[cv] == 0 {
                            touched.push(cv);
                        }
                        acc[cv] += w;
                    }
                }
            }
            self_loops[c] += internal_twice / 2;
            touched.sort_unstable();
            for &cv in &touched {
                targets.push(cv);
                weights.push(acc[cv]);
                acc[cv] = 0;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        Level {
            offsets,
            targets,
            weights,
            self_loops,
            degrees,
        }
    }

    /// Q(γ) of `labels` on this level, from scratch.
    fn quality(&self, labels: &[usize], gamma: f64, m: f64) -> f64 {
        let count = labels.iter().max().map_or(0, |&c| c + 1);
        let mut internal = vec![0f64; count];
        let mut kappa = vec![0f64; count];
        for u in 0..self.len() {
            let c = labels[u];
            internal[c] += self.self_loops[u] as f64;
            kappa[c] += self.degrees[u] as f64;
            for (v, w) in self.neighbors(u) {
                if u < v && labels[v] == c {
                    internal[c] += w as f64;
                }
            }
        }
        internal
            .iter()
            .zip(&kappa)
            .map(|(&e, &k)| e / m - gamma * (k / (2.0 * m)).powi(2))
            .sum()
    }
}

struct MoveOutcome {
    labels: Vec<usize>,
    moved: bool,
    gain: f64,
}

/// Repeated randomized sweeps of single-node moves until no move improves
/// Q(γ) by more than the tolerance. Returns labels in `0..n` (not dense).
fn local_moving(
    level: &Level,
    initial: Option<&[usize]>,
    gamma: f64,
    m: f64,
    rng: &mut Rng,
    options: &LouvainOptions,
) -> MoveOutcome {
    let n = level.len();
    let mut comm: Vec<usize> = match initial {
        Some(init) => init.to_vec(),
        None => (0..n).collect(),
    };
    let mut kappa = vec![0f64; n];
    let mut size = vec![0usize; n];
    for (u, &c) in comm.iter().enumerate() {
        kappa[c] += level.degrees[u] as f64;
        size[c] += 1;
    }
    let mut empties: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();

    // Gains are measured in edge units (Q gain × m).
    let penalty = gamma / (2.0 * m);
    let tolerance = options.tolerance * m;
    let mut scratch = vec![0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved = false;
    let mut total_gain = 0.0;
    #[cfg(debug_assertions)]
    let start_quality = level.quality(&comm, gamma, m);

    for _ in 0..options.max_sweeps {
        order.shuffle(rng);
        let mut moves = 0usize;
        for &i in &order {
            let home = comm[i];
            let ki = level.degrees[i] as f64;
            for (v, w) in level.neighbors(i) {
                let c = comm[v];
                if scratch[c] == 0.0 {
                    touched.push(c);
                }
                scratch[c] += w as f64;
            }
            kappa[home] -= ki;
            let stay = scratch[home] - penalty * ki * kappa[home];

            let mut best: Option<(usize, f64)> = None;
            for &c in &touched {
                if c == home {
                    continue;
                }
                let gain = scratch[c] - penalty * ki * kappa[c];
                best = match best {
                    Some((bc, bg)) if bg > gain || (bg == gain && bc < c) => Some((bc, bg)),
                    _ => Some((c, gain)),
                };
            }
            if size[home] > 1 && best.is_none_or(|(_, g)| g < 0.0) {
                if let Some(&empty) = empties.last() {
                    best = Some((empty, 0.0));
                }
            }

            let target = match best {
                Some((c, gain)) if gain > stay + tolerance => {
                    total_gain += (gain - stay) / m;
                    c
                }
                _ => home,
            };
            kappa[target] += ki;
            if target != home {
                size[home] -= 1;
                if size[home] == 0 {
                    empties.push(home);
                }
                if size[target] == 0 {
                    empties.pop();
                }
                size[target] += 1;
                comm[i] = target;
                moves += 1;
            }
            for &c in &touched {
                scratch[c] = 0.0;
            }
            touched.clear();
        }
        if moves == 0 {
            break;
        }
        moved = true;
        #[cfg(debug_assertions)]
        {
            let recomputed = level.quality(&comm, gamma, m);
            debug_assert!(
                (recomputed - (start_quality + total_gain)).abs() < 1e-9,
                "tracked Q drifted: {recomputed} vs {}",
                start_quality + total_gain
            );
        }
    }
    MoveOutcome {
        labels: comm,
        moved,
        gain: total_gain,
    }
}

/// Moves every node exactly once, each time taking the best available move
/// even if it lowers Q(γ), then rewinds to the best point of the sequence.
/// Repeats while that point beats the start by more than `tolerance` (edge
/// units). Ties go to the smallest node, then the smallest community.
/// Returns whether `comm` (labels below `n`) changed.
fn fine_tune(level: &Level, comm: &mut [usize], gamma: f64, m: f64, tolerance: f64) -> bool {
    let n = level.len();
    let penalty = gamma / (2.0 * m);
    let mut scratch = vec![0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut improved = false;

    loop {
        let start = comm.to_vec();
        let mut kappa = vec![0f64; n];
        let mut size = vec![0usize; n];
        for (u, &c) in comm.iter().enumerate() {
            kappa[c] += level.degrees[u] as f64;
            size[c] += 1;
        }
        let mut empties: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();
        let mut locked = vec![false; n];
        let mut moves: Vec<(usize, usize)> = Vec::with_capacity(n);
        let (mut total, mut best_total, mut best_len) = (0.0, 0.0, 0);

        for _ in 0..n {
            let mut best: Option<(f64, usize, usize)> = None;
            for i in (0..n).filter(|&i| !locked[i]) {
                let home = comm[i];
                let ki = level.degrees[i] as f64;
                for (v, w) in level.neighbors(i) {
                    let c = comm[v];
                    if scratch[c] == 0.0 {
                        touched.push(c);
                    }
                    scratch[c] += w as f64;
                }
                let stay = scratch[home] - penalty * ki * (kappa[home] - ki);
                touched.sort_unstable();
                let mut consider = |gain: f64, c: usize| {
                    if best.is_none_or(|(bg, _, _)| gain > bg) {
                        best = Some((gain, i, c));
                    }
                };
                for &c in &touched {
                    if c != home {
                        consider(scratch[c] - penalty * ki * kappa[c] - stay, c);
                    }
                }
                if size[home] > 1 {
                    if let Some(&empty) = empties.last() {
                        consider(-stay, empty);
                    }
                }
                for &c in &touched {
                    scratch[c] = 0.0;
                }
                touched.clear();
            }
            let Some((gain, i, target)) = best else { break };
            let home = comm[i];
            let ki = level.degrees[i] as f64;
            kappa[home] -= ki;
            kappa[target] += ki;
            size[home] -= 1;
            if size[home] == 0 {
                empties.push(home);
            }
            if size[target] == 0 {
                empties.retain(|&c| c != target);
            }
            size[target] += 1;
            comm[i] = target;
            locked[i] = true;
            moves.push((i, target));
            total += gain;
            if total > best_total + tolerance {
                best_total = total;
                best_len = moves.len();
            }
        }

        comm.copy_from_slice(&start);
        if best_len == 0 {
            return improved;
        }
        for &(i, target) in &moves[..best_len] {
            comm[i] = target;
        }
        improved = true;
    }
}

/// Dense relabeling by first appearance; returns the community count.
fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let dense = canonical_labels(labels);
    let count = dense.iter().max().map_or(0, |&c| c + 1);
    (dense, count)
}

/// Maximizes Q(γ) and returns a local optimum: no single-node move and no
/// merge of two communities raises Q(γ) by more than `options.tolerance`.
///
/// Each round runs local moving on the original nodes (starting from the
/// current partition), then repeatedly aggregates communities into
/// super-nodes and moves those. Rounds repeat until neither phase moves.
/// Visit order is a fresh seeded permutation per sweep and ties between
/// candidate communities go to the smallest community id.
pub fn louvain_maximize(
    graph: &Graph,
    gamma: ResolutionParam,
    seed: u64,
    options: &LouvainOptions,
) -> Result<Partition> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if options.restarts == 0 {
        return Err(Error::param("restarts", "must be at least 1"));
    }
    let base = Level::from_graph(graph);
    let mut best: Option<(f64, Partition)> = None;
    for r in 0..options.restarts {
        let run_seed = if r == 0 {
            seed
        } else {
            derive_seed(seed, r as u64)
        };
        let partition = single_run(graph, &base, gamma, run_seed, options)?;
        let q = modularity_of_stats(&partition, gamma);
        if best.as_ref().is_none_or(|(bq, _)| q > *bq) {
            best = Some((q, partition));
        }
    }
    Ok(best.expect("at least one run").1)
}

fn single_run(
    graph: &Graph,
    base: &Level,
    gamma: ResolutionParam,
    seed: u64,
    options: &LouvainOptions,
) -> Result<Partition> {
    let m = graph.edge_count() as f64;
    let gamma = gamma.0;
    let mut rng = rng_from_seed(seed);
    let mut membership: Vec<usize> = (0..graph.node_count()).collect();

    for _ in 0..options.max_rounds {
        let pass = local_moving(base, Some(&membership), gamma, m, &mut rng, options);
        let mut any_moved = pass.moved;
        let (labels, mut count) = renumber(&pass.labels);
        membership = labels;

        let mut level = base.aggregate(&membership, count);
        while level.len() > 1 {
            let mut pass = local_moving(&level, None, gamma, m, &mut rng, options);
            debug_assert!(!pass.moved || pass.gain > 0.0);
            if level.len() <= options.fine_tune_max_nodes {
                pass.moved |= fine_tune(&level, &mut pass.labels, gamma, m, options.tolerance * m);
            }
            if !pass.moved {
                break;
            }
            any_moved = true;
            let (labels, next_count) = renumber(&pass.labels);
            for c in membership.iter_mut() {
                *c = labels[*c];
            }
            if next_count == count {
                break;
            }
            count = next_count;
            level = level.aggregate(&labels, count);
        }
        if !any_moved {
            let tune = graph.node_count() <= options.fine_tune_max_nodes;
            if !(tune && fine_tune(base, &mut membership, gamma, m, options.tolerance * m)) {
                break;
            }
        }
    }
    partition_stats(graph, &canonical_labels(&membership))
}
