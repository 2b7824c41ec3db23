//! Library half of the `opercalc` binary, split out for testing.

pub mod commands;
pub mod error;
pub mod verify;

pub use error::CliError;
