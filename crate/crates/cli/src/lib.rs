//! Library half of the `torus-rigidity` command-line tool: document
//! formats and the subcommands.

pub mod commands;
pub mod document;

/// Environment variable overriding the default number of verification
/// samples.
pub const SAMPLES_ENV: &str = "TORUS_RIGIDITY_SAMPLES";
