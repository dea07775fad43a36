//! Library side of the command-line front end, exposed for integration
//! tests: configuration, CSV ingestion, synthetic data, artifact writing,
//! and the subcommand implementations.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod synth;
