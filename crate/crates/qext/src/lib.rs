//! Command-line driver for `qext-core`: configuration, caching, and CSV/JSON tables.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod records;

pub use commands::{run, Outcome};
pub use config::{Args, Command, Format, RunConfig};
pub use error::{CliError, CliResult};
