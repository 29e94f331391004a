//! File formats and command-line front end for `extremal-core`.

pub mod angle;
pub mod cli;
pub mod docs;
pub mod format;

pub use cli::{run, Cli, Failure, Output};
