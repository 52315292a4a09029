//! Experiment runner for the `qwalk` command-line tool: configuration
//! parsing, command dispatch and artifact writing.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_angle, parse_config, Command, ConfigFile, ExperimentConfig};
pub use error::CliError;
pub use output::{write_bundle, ResultBundle, RunInfo};
pub use run::run_experiment;
