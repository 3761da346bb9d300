//! Sweep driver behind the `resonance` binary: configuration, the `solve` / `compare` /
//! `plot` pipelines and their file formats.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{compare, solve, CompareReport, CompareRow, RowFailure, SolveReport};
pub use config::{OutputFormat, RawConfig, SweepConfig};
