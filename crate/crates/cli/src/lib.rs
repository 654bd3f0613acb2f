//! File format, report rendering and subcommands behind the `tpn` binary.

pub mod commands;
pub mod error;
pub mod report;
pub mod systemfile;

pub use commands::{run, Cli, EXIT_FAIL, EXIT_FINDING, EXIT_INPUT, EXIT_PASS};
pub use error::CliError;
pub use systemfile::{load_system, parse_system, render_system, save_system};
