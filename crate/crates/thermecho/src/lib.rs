//! Companion to `thermecho-core`: a dense exact-diagonalization oracle,
//! verification suites, run configuration, CSV/JSON output and the
//! `thermecho` command-line front end.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod verify;

pub use error::{CliError, CliResult};
