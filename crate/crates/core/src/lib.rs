//! Community detection by generalized modularity, with resolution-parameter
//! bounds estimated from degree-corrected stochastic block models.
//!
//! The crate is organised around an immutable [`Graph`] (an undirected
//! multigraph with self-loops) and a [`Partition`] of its nodes carrying the
//! per-community edge statistics that every estimator needs.
//!
//! * [`modularity`]: Q(γ), merge gains and a seeded Louvain maximizer.
//! * [`resolution`]: block density estimates and the admissible γ interval.
//! * [`model_selection`]: Bayes posterior odds of "one community" versus
//!   "planted partition".
//! * [`multiscale`]: recursive detection at a fixed γ₀ per level.
//! * [`metrics`]: NMI, ARI and F-measure.
//! * [`generators`]: DC-SBM, planted-partition, Erdős–Rényi and fixture graphs.

pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod model_selection;
pub mod modularity;
pub mod multiscale;
pub mod partition;
pub mod resolution;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Graph, Subgraph};
pub use io::NodeLabels;
pub use model_selection::{bayes_log_odds, OddsReport};
pub use modularity::{louvain_maximize, modularity, LouvainOptions, ResolutionParam};
pub use multiscale::{multiscale_detect, CommunityTree, MultiscaleOptions};
pub use partition::{partition_stats, Partition};
pub use resolution::{DensityMatrix, PpmFit, ResolutionInterval};
