//! Batch front end for `resolv-core`: model generation, detection,
//! resolution bounds, γ sweeps and partition scoring.

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod sweep;
pub mod truth;

pub use error::{exit, CliError, CliResult};
