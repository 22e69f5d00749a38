//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A direction was requested from a zero-length vector.
    #[error("zero-length vector has no direction")]
    ZeroVector,

    /// Velocity estimation needs at least two position samples.
    #[error("velocity estimation needs at least 2 samples, got {0}")]
    InsufficientHistory(usize),

    /// The arena or trial parameters violate a structural invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A simulated quantity became non-finite; the trial is aborted.
    #[error("simulation fault at tick {tick}: {detail}")]
    SimulationFault { tick: u64, detail: String },

    /// A trial inside a grid failed; names the offending cell.
    #[error("grid cell {cell} failed: {source}")]
    GridCell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed trace data: {0}")]
    TraceParse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
