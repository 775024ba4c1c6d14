//! Support library for the `meanforge` command-line tool: run configuration,
//! deterministic trial generation, JSON file formats, and the suite runner.

pub mod config;
pub mod gen;
pub mod io;
pub mod suite;
