//! Edge-list and community-file formats.
//!
//! Edge list: one `u v` pair per line separated by tabs or spaces, lines
//! starting with `#` are comments. Community file: one `node community` pair
//! per line with the same comment rule. Node labels are arbitrary tokens;
//! on ingestion they are relabeled to dense ids in label order (numeric order
//! when every label is an unsigned integer, lexicographic otherwise).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone)]
pub struct EdgeListFormat {
    /// Lines whose first non-blank character is one of these are skipped.
    pub comment_chars: Vec<char>,
    /// Accept lines with more than two columns and ignore the rest
    /// (e.g. weight columns). Weights are never read.
    pub ignore_extra_columns: bool,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat {
            comment_chars: vec!['#'],
            ignore_extra_columns: false,
        }
    }
}

/// Dense id ↔ original label mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLabels {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeLabels {
    /// Assigns dense ids to the distinct labels in canonical label order.
    pub fn from_unordered<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        sort_labels(&mut labels);
        labels.dedup();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        NodeLabels { labels, index }
    }

    /// Labels `0..n` rendered as decimal strings.
    pub fn identity(n: usize) -> Self {
        Self::from_unordered((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn sort_labels(labels: &mut [String]) {
    if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
        labels.sort_unstable_by_key(|l| l.parse::<u64>().unwrap_or(u64::MAX));
    } else {
        labels.sort_unstable();
    }
}

/// A graph read from disk together with its original node labels.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: NodeLabels,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn is_comment(line: &str, comment_chars: &[char]) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with(comment_chars)
}

pub fn load_edge_list(path: &Path, format: &EdgeListFormat) -> Result<LabeledGraph> {
    let reader = open(path)?;
    parse_edge_list(reader, format, &path.display().to_string()).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Parses an edge list from any reader. `source` names the input in errors.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    format: &EdgeListFormat,
    source: &str,
) -> Result<LabeledGraph> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: Default::default(),
            source,
        })?;
        if is_comment(&line, &format.comment_chars) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(u), Some(v)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected two node labels, got {line:?}"),
            });
        };
        if !format.ignore_extra_columns && tokens.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected exactly two columns, got {line:?}"),
            });
        }
        pairs.push((u.to_string(), v.to_string()));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput(source.to_string()));
    }

    let labels = NodeLabels::from_unordered(
        pairs
            .iter()
            .flat_map(|(u, v)| [u.as_str(), v.as_str()])
            .collect::<std::collections::HashSet<_>>(),
    );
    let graph = Graph::from_pairs(
        labels.len(),
        pairs
            .iter()
            .map(|(u, v)| (labels.index[u.as_str()], labels.index[v.as_str()])),
    )?;
    Ok(LabeledGraph { graph, labels })
}

/// Writes one line per unit of multiplicity, sorted by `(u, v)`. The output is
/// a canonical serialization: equal graphs produce equal bytes.
pub fn write_edge_list<W: Write>(
    mut out: W,
    graph: &Graph,
    labels: Option<&NodeLabels>,
) -> std::io::Result<()> {
    for e in graph.edges() {
        for _ in 0..e.multiplicity {
            match labels {
                Some(l) => writeln!(out, "{}\t{}", l.label(e.u), l.label(e.v))?,
                None => writeln!(out, "{}\t{}", e.u, e.v)?,
            }
        }
    }
    Ok(())
}

/// `(node label, community label)` pairs in file order.
pub fn read_communities(path: &Path) -> Result<Vec<(String, String)>> {
    let reader = open(path)?;
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if is_comment(&line, &['#']) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected `node community`, got {line:?}"),
            });
        }
        if let Some(prev) = seen.insert(tokens[0].to_string(), i + 1) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("node {} already assigned on line {prev}", tokens[0]),
            });
        }
        out.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput(path.display().to_string()));
    }
    Ok(out)
}

/// One community per line, members separated by whitespace, in file order.
/// This is the layout of ranked ground-truth collections, which may overlap.
pub fn read_community_lines(path: &Path) -> Result<Vec<Vec<String>>> {
    let reader = open(path)?;
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if is_comment(&line, &['#']) {
            continue;
        }
        out.push(line.split_whitespace().map(str::to_string).collect());
    }
    if out.is_empty() {
        return Err(Error::EmptyInput(path.display().to_string()));
    }
    Ok(out)
}

/// Maps community-file pairs onto the nodes of a labeled graph.
///
/// Every graph node must be assigned and every listed node must exist.
/// Community labels are compacted to `0..B` in canonical label order.
pub fn assignment_for_graph(labels: &NodeLabels, pairs: &[(String, String)]) -> Result<Vec<usize>> {
    let communities = NodeLabels::from_unordered(pairs.iter().map(|(_, c)| c.as_str()));
    let mut assignment = vec![usize::MAX; labels.len()];
    for (node, community) in pairs {
        let id = labels
            .id(node)
            .ok_or_else(|| Error::CommunityFile(format!("unknown node {node}")))?;
        assignment[id] = communities.id(community).expect("label indexed above");
    }
    if let Some(missing) = assignment.iter().position(|&c| c == usize::MAX) {
        return Err(Error::CommunityFile(format!(
            "node {} has no community",
            labels.label(missing)
        )));
    }
    Ok(assignment)
}

pub fn write_communities<W: Write>(
    mut out: W,
    partition: &Partition,
    labels: Option<&NodeLabels>,
) -> std::io::Result<()> {
    for (node, &c) in partition.assignment().iter().enumerate() {
        match labels {
            Some(l) => writeln!(out, "{}\t{}", l.label(node), c)?,
            None => writeln!(out, "{node}\t{c}")?,
        }
    }
    Ok(())
}
