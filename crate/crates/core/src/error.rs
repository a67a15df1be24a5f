use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("community file: {0}")]
    CommunityFile(String),

    #[error("{0}: no entries found")]
    EmptyInput(String),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("empty node set")]
    EmptyNodeSet,

    #[error("assignment covers {got} nodes, graph has {expected}")]
    AssignmentLength { expected: usize, got: usize },

    #[error("community {0} out of range")]
    CommunityOutOfRange(usize),

    #[error("community {community} has zero degree sum")]
    ZeroDegreeCommunity { community: usize },

    #[error("need at least {needed} communities, got {got}")]
    TooFewCommunities { needed: usize, got: usize },

    #[error("partitions cover different node sets ({left} vs {right} nodes)")]
    NodeSetMismatch { left: usize, right: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
