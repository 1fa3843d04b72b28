//! Config-driven experiment runner behind the `specavg` binary.

pub mod catalog;
pub mod config;
pub mod run;

pub use catalog::{catalog, catalog_json, CatalogEntry};
pub use config::{ConfigError, Experiment, ExperimentConfig, SCHEMA_VERSION};
pub use run::{describe, output_dir, run, RunError, RunReport, OUTPUT_ROOT_ENV};
