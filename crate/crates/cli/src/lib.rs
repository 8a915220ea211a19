//! Experiment files, orchestration and CSV output for `fracblow`.

// `!(x > 0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiment;

pub use config::{load_config, parse_spec, ExperimentKind, ExperimentSpec};
pub use error::{CliError, CliResult};
pub use experiment::{run_experiment, ExperimentReport};
