#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Batch driver for the `wardowski` toolkit: experiment configs in, JSON and
//! CSV reports out.

pub mod config;
pub mod descriptor;
pub mod error;
pub mod output;
pub mod pipeline;

use std::collections::BTreeSet;
use std::path::Path;

pub use config::{ConfigFile, Experiment, RawExperiment, Stage};
pub use error::CliError;
pub use output::Format;
pub use pipeline::ExperimentOutput;

/// Validates every experiment, then runs them. Nothing runs if any experiment
/// is invalid.
pub fn run_config(
    file: Option<(&ConfigFile, &Path)>,
    overrides: &RawExperiment,
    stages: Option<&BTreeSet<Stage>>,
    seed: u64,
) -> Result<Vec<ExperimentOutput>, CliError> {
    let experiments = config::load_experiments(file, overrides, seed)?;
    Ok(pipeline::run_all(&experiments, stages))
}
