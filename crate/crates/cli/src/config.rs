//! Model configuration files for `generate`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use resolv_core::generators::{
    make_clique, make_plateau_fixture, sample_dcsbm, sample_er, sample_extended_ppm, DcsbmParams,
    ExtendedPpmParams,
};
use resolv_core::{partition_stats, Graph, Partition};

use crate::error::{CliError, CliResult};

/// A generator and its parameters, tagged by `"model"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Dcsbm(DcsbmParams),
    ExtendedPpm(ExtendedPpmParams),
    /// Two 6-cliques and a 100-node, 956-edge random block, pairwise bridged.
    Plateau {},
    /// `edges` distinct uniform pairs on `nodes` nodes.
    Er {
        nodes: usize,
        edges: usize,
    },
    Clique {
        nodes: usize,
    },
}

impl ModelConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            ConfigError::Syntax(message) => CliError::ConfigSyntax {
                path: path.to_path_buf(),
                message,
            },
            ConfigError::Schema(message) => CliError::ConfigSchema {
                path: path.to_path_buf(),
                message,
            },
        })
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: ModelConfig = serde_json::from_str(text).map_err(|e| {
            if e.is_syntax() || e.is_eof() {
                ConfigError::Syntax(e.to_string())
            } else {
                ConfigError::Schema(e.to_string())
            }
        })?;
        let checked = match &config {
            ModelConfig::Dcsbm(p) => p.validate(),
            ModelConfig::ExtendedPpm(p) => p.validate(),
            _ => Ok(()),
        };
        checked.map_err(|e| ConfigError::Schema(e.to_string()))?;
        Ok(config)
    }

    /// Samples the model; returns the graph and its planted communities.
    pub fn generate(&self, seed: u64) -> CliResult<(Graph, Partition)> {
        Ok(match self {
            ModelConfig::Dcsbm(p) => {
                let graph = sample_dcsbm(p, seed)?;
                let truth = partition_stats(&graph, &p.block_assignment)?;
                (graph, truth)
            }
            ModelConfig::ExtendedPpm(p) => sample_extended_ppm(p, seed)?,
            ModelConfig::Plateau {} => make_plateau_fixture(seed),
            ModelConfig::Er { nodes, edges } => {
                let graph = sample_er(*nodes, *edges, seed)?;
                let truth = Partition::whole(&graph);
                (graph, truth)
            }
            ModelConfig::Clique { nodes } => {
                let graph = make_clique(*nodes);
                let truth = Partition::whole(&graph);
                (graph, truth)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax(String),
    Schema(String),
}
