//! γ sweeps: one Louvain run per (γ, seed), scored against ground truth.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use resolv_core::metrics::{ari, nmi};
use resolv_core::modularity::modularity_of_stats;
use resolv_core::seed::derive_seed;
use resolv_core::{louvain_maximize, Graph, LouvainOptions, ResolutionParam};

use crate::error::{CliError, CliResult};
use crate::truth::GraphTruth;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
    /// Runs per γ. Run `j` uses `derive_seed(master_seed, j)` at every γ.
    pub seeds: usize,
    pub master_seed: u64,
    /// NMI level that defines the stable interval.
    pub threshold: f64,
    /// Worker threads; `None` lets the pool decide.
    pub threads: Option<usize>,
    pub louvain: LouvainOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRun {
    pub seed: u64,
    pub nmi: f64,
    pub ari: f64,
    pub communities: usize,
    pub modularity: f64,
    pub elapsed_seconds: f64,
}

/// Per-γ means over the seeds, plus the individual runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub nmi: f64,
    pub ari: f64,
    pub communities: f64,
    pub modularity: f64,
    pub elapsed_seconds: f64,
    pub runs: Vec<SweepRun>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableInterval {
    pub lower: f64,
    pub upper: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub nodes: usize,
    pub edges: u64,
    pub scored_nodes: usize,
    pub dropped_nodes: usize,
    pub seeds: usize,
    pub master_seed: u64,
    pub threshold: f64,
    pub rows: Vec<SweepRow>,
    /// Longest contiguous run of rows with mean NMI at or above the
    /// threshold (earliest on ties); `None` when no row qualifies.
    pub stable_interval: Option<StableInterval>,
}

fn validate(config: &SweepConfig) -> CliResult<()> {
    if config.gammas.is_empty() {
        return Err(CliError::argument("--grid", "the grid is empty"));
    }
    if config.gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::argument(
            "--grid",
            "values must be strictly increasing",
        ));
    }
    if config.seeds == 0 {
        return Err(CliError::argument(
            "--seeds",
            "at least one seed is required",
        ));
    }
    if !(0.0..=1.0).contains(&config.threshold) {
        return Err(CliError::argument("--threshold", "must lie in [0, 1]"));
    }
    if config.threads == Some(0) {
        return Err(CliError::argument("RESOLV_THREADS", "must be at least 1"));
    }
    Ok(())
}

fn run_one(
    graph: &Graph,
    truth: &GraphTruth,
    gamma: ResolutionParam,
    seed: u64,
    options: &LouvainOptions,
) -> resolv_core::Result<SweepRun> {
    let start = Instant::now();
    let partition = louvain_maximize(graph, gamma, seed, options)?;
    let elapsed_seconds = start.elapsed().as_secs_f64();
    let detected = truth.restrict(partition.assignment());
    Ok(SweepRun {
        seed,
        nmi: nmi(&detected, &truth.labels)?,
        ari: ari(&detected, &truth.labels)?,
        communities: partition.community_count(),
        modularity: modularity_of_stats(&partition, gamma),
        elapsed_seconds,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

pub fn stable_interval(rows: &[SweepRow], threshold: f64) -> Option<StableInterval> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..=rows.len() {
        let good = i < rows.len() && rows[i].nmi >= threshold;
        match (good, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(bs, be)| i - s > be - bs) {
                    best = Some((s, i));
                }
                start = None;
            }
            _ => {}
        }
    }
    best.map(|(s, e)| StableInterval {
        lower: rows[s].gamma,
        upper: rows[e - 1].gamma,
        rows: e - s,
    })
}

pub fn run_sweep(
    graph: &Graph,
    truth: &GraphTruth,
    config: &SweepConfig,
) -> CliResult<SweepReport> {
    validate(config)?;
    let gammas = config
        .gammas
        .iter()
        .map(|&g| ResolutionParam::new(g))
        .collect::<resolv_core::Result<Vec<_>>>()?;
    let seeds: Vec<u64> = (0..config.seeds as u64)
        .map(|j| derive_seed(config.master_seed, j))
        .collect();
    let jobs: Vec<(usize, u64)> = (0..gammas.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();

    let work = || {
        jobs.par_iter()
            .map(|&(i, seed)| run_one(graph, truth, gammas[i], seed, &config.louvain))
            .collect::<resolv_core::Result<Vec<_>>>()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = config.threads {
        builder = builder.num_threads(threads);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::argument("RESOLV_THREADS", e.to_string()))?;
    let runs = pool.install(work)?;

    let rows: Vec<SweepRow> = runs
        .chunks(config.seeds)
        .zip(&gammas)
        .map(|(runs, gamma)| SweepRow {
            gamma: gamma.value(),
            nmi: mean(runs.iter().map(|r| r.nmi)),
            ari: mean(runs.iter().map(|r| r.ari)),
            communities: mean(runs.iter().map(|r| r.communities as f64)),
            modularity: mean(runs.iter().map(|r| r.modularity)),
            elapsed_seconds: runs.iter().map(|r| r.elapsed_seconds).sum(),
            runs: runs.to_vec(),
        })
        .collect();
    Ok(SweepReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        scored_nodes: truth.nodes.len(),
        dropped_nodes: truth.dropped_nodes,
        seeds: config.seeds,
        master_seed: config.master_seed,
        threshold: config.threshold,
        stable_interval: stable_interval(&rows, config.threshold),
        rows,
    })
}

impl SweepReport {
    /// One line per γ with the per-seed means.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma,nmi,ari,communities,modularity,elapsed_seconds\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.gamma, r.nmi, r.ari, r.communities, r.modularity, r.elapsed_seconds
            )
            .expect("writing to a String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(gamma: f64, nmi: f64) -> SweepRow {
        SweepRow {
            gamma,
            nmi,
            ari: 0.0,
            communities: 1.0,
            modularity: 0.0,
            elapsed_seconds: 0.0,
            runs: Vec::new(),
        }
    }

    #[test]
    fn stable_interval_takes_longest_run() {
        let rows: Vec<SweepRow> = [0.95, 0.2, 0.91, 0.93, 0.99, 0.5, 0.92]
            .iter()
            .enumerate()
            .map(|(i, &n)| row(i as f64 + 1.0, n))
            .collect();
        let s = stable_interval(&rows, 0.9).unwrap();
        assert_eq!((s.lower, s.upper, s.rows), (3.0, 5.0, 3));
        assert!(stable_interval(&rows, 0.999).is_none());
    }

    #[test]
    fn stable_interval_reaching_the_end() {
        let rows = vec![row(1.0, 0.1), row(2.0, 0.95), row(3.0, 0.97)];
        let s = stable_interval(&rows, 0.9).unwrap();
        assert_eq!((s.lower, s.upper), (2.0, 3.0));
    }
}
