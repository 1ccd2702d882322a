//! Command-line front end: configuration, subcommands and deterministic
//! CSV/JSON output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{cmd_design, cmd_oracle, cmd_rates, cmd_spectrum, cmd_sweep};
pub use config::RunConfig;
pub use error::CliError;
pub use table::{Cell, OutputTable};
