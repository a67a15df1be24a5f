//! The work behind each subcommand. Everything returns in-memory outputs;
//! the binary decides where they go.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use resolv_core::io::{
    assignment_for_graph, load_edge_list, read_communities, write_communities, write_edge_list,
    EdgeListFormat, LabeledGraph,
};
use resolv_core::metrics::{ari, f_measure, nmi};
use resolv_core::modularity::modularity_of_stats;
use resolv_core::multiscale::{Decision, TreeNode};
use resolv_core::resolution::{
    estimate_density_matrix, fit_extended_ppm, fit_ppm, resolution_interval, ExtendedPpmFit,
};
use resolv_core::{
    louvain_maximize, multiscale_detect, partition_stats, CommunityTree, LouvainOptions,
    MultiscaleOptions, NodeLabels, OddsReport, Partition, PpmFit, ResolutionInterval,
    ResolutionParam,
};

use crate::config::ModelConfig;
use crate::error::{CliError, CliResult};
use crate::truth::Reference;

pub const TOOL: &str = "resolv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn community_text(partition: &Partition, labels: Option<&NodeLabels>) -> String {
    let mut buf = Vec::new();
    write_communities(&mut buf, partition, labels).expect("writing to memory");
    String::from_utf8(buf).expect("labels are UTF-8")
}

pub fn load_graph(path: &Path) -> CliResult<LabeledGraph> {
    Ok(load_edge_list(path, &EdgeListFormat::default())?)
}

#[derive(Debug, Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    nodes: usize,
    edges: u64,
    communities: usize,
    config: &'a ModelConfig,
}

/// Edge list, planted communities, and a provenance record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub edges: String,
    pub communities: String,
    pub provenance: String,
}

pub fn generate(config: &ModelConfig, seed: u64) -> CliResult<Generated> {
    let (graph, truth) = config.generate(seed)?;
    let mut edges = Vec::new();
    write_edge_list(&mut edges, &graph, None).expect("writing to memory");
    let provenance = Provenance {
        tool: TOOL,
        version: VERSION,
        seed,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        communities: truth.community_count(),
        config,
    };
    Ok(Generated {
        edges: String::from_utf8(edges).expect("numeric ids"),
        communities: community_text(&truth, None),
        provenance: serde_json::to_string_pretty(&provenance)? + "\n",
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Louvain,
    Multiscale,
}

#[derive(Debug, Clone, Copy)]
pub struct DetectParams {
    pub method: Method,
    pub gamma: f64,
    pub gamma0: f64,
    pub seed: u64,
    pub max_depth: usize,
    pub min_size: usize,
    /// Louvain runs per maximization; the best Q is kept.
    pub restarts: usize,
}

/// A recursion tree node with leaf members given by their input labels.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledNode {
    pub depth: usize,
    pub size: usize,
    pub edges: u64,
    pub effective_gamma: Option<f64>,
    pub odds: Option<OddsReport>,
    #[serde(flatten)]
    pub decision: Decision,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<LabeledNode>,
}

impl LabeledNode {
    fn new(node: &TreeNode, labels: &NodeLabels) -> Self {
        LabeledNode {
            depth: node.depth,
            size: node.size,
            edges: node.edges,
            effective_gamma: node.effective_gamma,
            odds: node.odds,
            decision: node.decision.clone(),
            nodes: node
                .nodes
                .iter()
                .map(|&i| labels.label(i).to_string())
                .collect(),
            children: node
                .children
                .iter()
                .map(|c| LabeledNode::new(c, labels))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledTree {
    pub gamma0: f64,
    pub seed: u64,
    pub leaf_count: usize,
    pub max_depth: usize,
    pub root: LabeledNode,
}

impl LabeledTree {
    pub fn new(tree: &CommunityTree, labels: &NodeLabels) -> Self {
        LabeledTree {
            gamma0: tree.gamma0,
            seed: tree.seed,
            leaf_count: tree.leaf_count(),
            max_depth: tree.max_depth(),
            root: LabeledNode::new(&tree.root, labels),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectReport {
    pub method: &'static str,
    pub seed: u64,
    pub nodes: usize,
    pub edges: u64,
    pub communities: usize,
    /// Resolution at which `modularity` is evaluated (γ, or γ₀ for multiscale).
    pub gamma: f64,
    pub modularity: f64,
    pub elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<LabeledTree>,
}

#[derive(Debug, Clone)]
pub struct Detected {
    pub partition: Partition,
    pub report: DetectReport,
    pub communities: String,
}

pub fn detect(input: &LabeledGraph, params: &DetectParams) -> CliResult<Detected> {
    let graph = &input.graph;
    let louvain = LouvainOptions {
        restarts: params.restarts,
        ..LouvainOptions::default()
    };
    let start = Instant::now();
    let (method, gamma, partition, tree) = match params.method {
        Method::Louvain => {
            let gamma = ResolutionParam::new(params.gamma)?;
            let p = louvain_maximize(graph, gamma, params.seed, &louvain)?;
            ("louvain", gamma, p, None)
        }
        Method::Multiscale => {
            let gamma = ResolutionParam::new(params.gamma0)?;
            let options = MultiscaleOptions {
                max_depth: params.max_depth,
                min_size: params.min_size,
                louvain,
            };
            let (p, tree) = multiscale_detect(graph, gamma, params.seed, &options)?;
            (
                "multiscale",
                gamma,
                p,
                Some(LabeledTree::new(&tree, &input.labels)),
            )
        }
    };
    let elapsed_seconds = start.elapsed().as_secs_f64();
    let report = DetectReport {
        method,
        seed: params.seed,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        communities: partition.community_count(),
        gamma: gamma.value(),
        modularity: modularity_of_stats(&partition, gamma),
        elapsed_seconds,
        tree,
    };
    let communities = community_text(&partition, Some(&input.labels));
    Ok(Detected {
        partition,
        report,
        communities,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub nodes: usize,
    pub edges: u64,
    pub communities: usize,
    /// Community labels in matrix order.
    pub community_labels: Vec<String>,
    pub density_matrix: Vec<Vec<f64>>,
    pub interval: ResolutionInterval,
    pub extended_ppm: ExtendedPpmFit,
    /// Absent with a single community.
    pub ppm: Option<PpmFit>,
}

pub fn bounds(input: &LabeledGraph, truth_path: &Path) -> CliResult<BoundsReport> {
    let pairs = read_communities(truth_path)?;
    let assignment = assignment_for_graph(&input.labels, &pairs)?;
    let community_labels = NodeLabels::from_unordered(pairs.iter().map(|(_, c)| c.as_str()));
    let partition = partition_stats(&input.graph, &assignment)?;
    let density = estimate_density_matrix(&input.graph, &partition)?;
    let ppm = if partition.community_count() >= 2 {
        Some(fit_ppm(&input.graph, &partition)?)
    } else {
        None
    };
    Ok(BoundsReport {
        nodes: input.graph.node_count(),
        edges: input.graph.edge_count(),
        communities: partition.community_count(),
        community_labels: community_labels.labels().to_vec(),
        density_matrix: density.to_dense(),
        interval: resolution_interval(&density),
        extended_ppm: fit_extended_ppm(&input.graph, &partition)?,
        ppm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    /// Absent when the reference communities overlap.
    pub nmi: Option<f64>,
    pub ari: Option<f64>,
    pub f_measure: f64,
    pub top_k: usize,
    /// Nodes scored: those present in both inputs.
    pub nodes: usize,
    pub dropped_nodes: usize,
    pub detected_communities: usize,
    pub reference_communities: usize,
}

pub fn metrics(
    detected: &[(String, String)],
    reference: &Reference,
    top_k: Option<usize>,
) -> CliResult<MetricsReport> {
    reference.check_top_k(top_k)?;
    let truth_nodes: HashSet<&str> = reference
        .sets
        .iter()
        .flat_map(|s| s.iter().map(String::as_str))
        .collect();
    let mut community_ids: HashMap<&str, usize> = HashMap::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    for (node, community) in detected {
        let next = community_ids.len();
        let c = *community_ids.entry(community).or_insert(next);
        if truth_nodes.contains(node.as_str()) {
            index.insert(node, labels.len());
            labels.push(c);
        }
    }
    if labels.is_empty() {
        return Err(CliError::argument(
            "--truth",
            "no node is shared with the detected file",
        ));
    }
    let dropped_nodes = (detected.len() - labels.len()) + (truth_nodes.len() - labels.len());
    let sets: Vec<Vec<usize>> = reference
        .sets
        .iter()
        .map(|s| {
            s.iter()
                .filter_map(|n| index.get(n.as_str()).copied())
                .collect()
        })
        .collect();
    let f = f_measure(&labels, &sets, top_k)?;
    let (nmi_score, ari_score) = match reference.membership() {
        Some(membership) => {
            let mut truth = vec![0; labels.len()];
            for (node, &i) in &index {
                truth[i] = membership[node];
            }
            (Some(nmi(&labels, &truth)?), Some(ari(&labels, &truth)?))
        }
        None => (None, None),
    };
    Ok(MetricsReport {
        nmi: nmi_score,
        ari: ari_score,
        f_measure: f,
        top_k: top_k.unwrap_or(reference.sets.len()),
        nodes: labels.len(),
        dropped_nodes,
        detected_communities: community_ids.len(),
        reference_communities: reference.sets.len(),
    })
}

impl MetricsReport {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "nmi,ari,f_measure,top_k,nodes,dropped_nodes\n{},{},{},{},{},{}\n",
            opt(self.nmi),
            opt(self.ari),
            self.f_measure,
            self.top_k,
            self.nodes,
            self.dropped_nodes
        )
    }
}
