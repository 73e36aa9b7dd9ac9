//! File formats and the command-line driver around `fpdyn-core`.

pub mod cli;
pub mod config;
pub mod csv;
pub mod experiment;
pub mod report;
pub mod tracefile;
