//! Batch experiment machinery: configuration, the replication grid,
//! trace/summary persistence, trajectory rendering, and the CLI.

pub mod cli;
pub mod config;
pub mod csv;
pub mod grid;
pub mod svg;

pub use config::Config;
pub use grid::{run_grid, ExperimentGrid, HumanChoice, SummaryRow};
