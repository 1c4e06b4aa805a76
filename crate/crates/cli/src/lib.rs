//! Command-line front-end: Newick trees to partial splits, split closures,
//! weak-compatibility and circularity checks, and Nexus export.

pub mod commands;
pub mod error;
pub mod nexus;
pub mod splits_file;

pub use commands::{Input, Outcome};
pub use error::CliError;
