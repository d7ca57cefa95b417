//! Command-line front end for the optomechanical squeezing simulator:
//! strict config parsing, mode dispatch, and CSV/JSON artifact output.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;

pub use config::{parse_config, preset_config, Mode, ParamSource, RunConfig};
pub use error::{CliError, ErrorClass};
pub use runner::{run, run_sweep_parallel, RunOutcome};
