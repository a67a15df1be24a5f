//! Block-density estimates and the admissible resolution interval.
//!
//! Given a partition, the density between blocks `r != s` is estimated as
//! `ω̂_rs = 2 m_rs m / (κ_r κ_s)` and inside block `r` as
//! `ω̂_rr = 4 m_r m / κ_r²`: observed edges over the configuration-model
//! expectation. Modularity maximization at γ can keep every block intact
//! only if `max_{r≠s} ω̂_rs ≤ γ ≤ min_t ω̂_tt`. When that interval is empty no
//! single γ recovers the partition (the plateau condition).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Symmetric `B×B` matrix of estimated block densities.
///
/// Off-diagonal entries are stored sparsely; absent pairs are zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    size: usize,
    diagonal: Vec<f64>,
    #[serde(serialize_with = "serialize_off_diagonal")]
    off_diagonal: BTreeMap<(usize, usize), f64>,
}

fn serialize_off_diagonal<S: serde::Serializer>(
    entries: &BTreeMap<(usize, usize), f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(entries.iter().map(|(&(r, s), &v)| (r, s, v)))
}

impl DensityMatrix {
    /// Builds a matrix from dense rows. Used for hand-specified matrices.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut diagonal = Vec::with_capacity(size);
        let mut off_diagonal = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::param(
                    "density matrix",
                    format!("row {r} has {} entries", row.len()),
                ));
            }
            for (s, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v >= 0.0) || v != rows[s][r] {
                    return Err(Error::param(
                        "density matrix",
                        format!("entry ({r},{s}) must be finite, >= 0 and symmetric"),
                    ));
                }
                if r == s {
                    diagonal.push(v);
                } else if r < s && v != 0.0 {
                    off_diagonal.insert((r, s), v);
                }
            }
        }
        Ok(DensityMatrix {
            size,
            diagonal,
            off_diagonal,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, s: usize) -> f64 {
        if r == s {
            self.diagonal[r]
        } else {
            self.off_diagonal
                .get(&(r.min(s), r.max(s)))
                .copied()
                .unwrap_or(0.0)
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Non-zero off-diagonal entries `((r, s), ω̂_rs)` with `r < s`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.off_diagonal.iter().map(|(&k, &v)| (k, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.size)
            .map(|r| (0..self.size).map(|s| self.get(r, s)).collect())
            .collect()
    }
}

/// `[lower, upper]` bounds on γ; `empty` when `lower > upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionInterval {
    pub lower: f64,
    pub upper: f64,
    pub empty: bool,
}

impl ResolutionInterval {
    pub fn contains(&self, gamma: f64) -> bool {
        !self.empty && self.lower <= gamma && gamma <= self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn check_partition(graph: &Graph, partition: &Partition) -> Result<()> {
    if partition.node_count() != graph.node_count() {
        return Err(Error::AssignmentLength {
            expected: graph.node_count(),
            got: partition.node_count(),
        });
    }
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(r) = partition.degree_sums().iter().position(|&k| k == 0) {
        return Err(Error::ZeroDegreeCommunity { community: r });
    }
    Ok(())
}

pub fn estimate_density_matrix(graph: &Graph, partition: &Partition) -> Result<DensityMatrix> {
    check_partition(graph, partition)?;
    let m = graph.edge_count() as f64;
    let kappa = partition.degree_sums();
    let diagonal = partition
        .internal_edges()
        .iter()
        .zip(kappa)
        .map(|(&mr, &kr)| 4.0 * mr as f64 * m / (kr as f64 * kr as f64))
        .collect();
    let off_diagonal = partition
        .between_pairs()
        .map(|((r, s), mrs)| {
            let v = 2.0 * mrs as f64 * m / (kappa[r] as f64 * kappa[s] as f64);
            ((r, s), v)
        })
        .collect();
    Ok(DensityMatrix {
        size: partition.community_count(),
        diagonal,
        off_diagonal,
    })
}

/// Lower bound is the largest off-diagonal density (zero when there is none,
/// e.g. a single block), upper bound the smallest diagonal density.
pub fn resolution_interval(density: &DensityMatrix) -> ResolutionInterval {
    let lower = density
        .off_diagonal
        .values()
        .copied()
        .fold(0.0f64, f64::max);
    let upper = density
        .diagonal
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    ResolutionInterval {
        lower,
        upper,
        empty: lower > upper,
    }
}

/// Planted-partition fit: pooled in/out densities and the γ at which
/// modularity maximization coincides with maximum likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PpmFit {
    pub omega_in: f64,
    pub omega_out: f64,
    pub gamma_mle: f64,
    /// Set when there are no inter-community edges (`ω̂_out = 0`); γ is then
    /// the limit value 0.
    pub degenerate: bool,
}

/// `(ω_in − ω_out) / (ln ω_in − ln ω_out)`, continuous at `ω_in = ω_out`
/// (value `ω_in`) and at either density zero (value 0).
pub fn gamma_mle(omega_in: f64, omega_out: f64) -> f64 {
    if omega_in == omega_out {
        return omega_in;
    }
    if omega_in == 0.0 || omega_out == 0.0 {
        return 0.0;
    }
    let (lo, hi) = if omega_in < omega_out {
        (omega_in, omega_out)
    } else {
        (omega_out, omega_in)
    };
    // γ = lo · d / ln(1 + d) with d = hi/lo − 1; exact value lies in [lo, hi],
    // the clamp only absorbs rounding.
    let d = (hi - lo) / lo;
    (lo * d / d.ln_1p()).clamp(lo, hi)
}

/// Pooled coefficients `a = 2 Σ_r m_r` and `b = Σ_r κ_r² / 2m`.
pub(crate) fn pooled_coefficients(partition: &Partition) -> (f64, f64) {
    let two_m = 2.0 * partition.edge_total() as f64;
    let a = 2.0 * partition.internal_edges().iter().sum::<u64>() as f64;
    let b = partition
        .degree_sums()
        .iter()
        .map(|&k| k as f64 * k as f64)
        .sum::<f64>()
        / two_m;
    (a, b)
}

fn require_split(partition: &Partition) -> Result<()> {
    if partition.community_count() < 2 {
        return Err(Error::TooFewCommunities {
            needed: 2,
            got: partition.community_count(),
        });
    }
    Ok(())
}

pub fn fit_ppm(graph: &Graph, partition: &Partition) -> Result<PpmFit> {
    check_partition(graph, partition)?;
    require_split(partition)?;
    let two_m = 2.0 * graph.edge_count() as f64;
    let (a, b) = pooled_coefficients(partition);
    let omega_in = a / b;
    let omega_out = (two_m - a) / (two_m - b);
    Ok(PpmFit {
        omega_in,
        omega_out,
        gamma_mle: gamma_mle(omega_in, omega_out),
        degenerate: omega_out == 0.0,
    })
}

/// Extended planted-partition fit: one shared background density and a
/// density per block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedPpmFit {
    pub omega_out: f64,
    pub omega_diag: Vec<f64>,
}

impl ExtendedPpmFit {
    /// The loosest block's density, the upper end of the usable γ range.
    pub fn min_diag(&self) -> f64 {
        self.omega_diag
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn interval(&self) -> ResolutionInterval {
        let upper = self.min_diag();
        ResolutionInterval {
            lower: self.omega_out,
            upper,
            empty: self.omega_out > upper,
        }
    }
}

pub fn fit_extended_ppm(graph: &Graph, partition: &Partition) -> Result<ExtendedPpmFit> {
    require_split(partition)?;
    let density = estimate_density_matrix(graph, partition)?;
    let two_m = 2.0 * graph.edge_count() as f64;
    let (a, b) = pooled_coefficients(partition);
    Ok(ExtendedPpmFit {
        omega_out: (two_m - a) / (two_m - b),
        omega_diag: density.diagonal,
    })
}

/// γ on a subgraph with `m_sub` edges acts like `γ_sub · m / m_sub` on the
/// whole graph with `m` edges.
pub fn effective_resolution(gamma_sub: f64, m: u64, m_sub: u64) -> f64 {
    gamma_sub * m as f64 / m_sub as f64
}
