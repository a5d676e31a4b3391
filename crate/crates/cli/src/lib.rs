//! Experiment runner for `demon-core`.
//!
//! A run is described by a strict TOML [`config::ExperimentConfig`]. The named experiment is
//! looked up in a [`registry::Registry`] of [`registry::Experiment`] trait objects, executed
//! with the config's master seed, and its [`table::ResultTable`] is written as CSV or JSON
//! headed by the resolved config and a [`output::RunManifest`].

pub mod acceptance;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod registry;
pub mod runner;
pub mod table;

pub use config::{ExperimentConfig, Format};
pub use error::{CliError, Result};
pub use registry::{Experiment, Registry, TypedExperiment};
pub use runner::{run, sweep, RunOutcome};
