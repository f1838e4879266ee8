//! Experiment harness for the kicked top: layered JSON/flag configuration,
//! parallel sweeps with ordered output, CSV tables and checksummed
//! manifests.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod run;

pub use config::{layered, ConfigLayer, RunConfig, PRESETS};
pub use error::{CliError, CliResult};
pub use run::execute;
