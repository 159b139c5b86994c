//! File formats, census runner and command dispatch for the `causal` tool.

pub mod census;
pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError};
