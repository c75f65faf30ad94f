//! Brute-force and Monte Carlo oracles on finite graphs.

mod graph;
mod percolation;
mod spectra;

use thiserror::Error;

pub use graph::RootedGraph;
pub use percolation::{
    linear_grid, percolation_sample, percolation_sample_indexed, percolation_sweep, ClusterSummary,
    PercolationMode, PercolationSample, SweepOptions, SweepPoint, SweepResult,
};
pub use spectra::{count_walk_spectra, SpectraOptions, WalkSpectra, DEFAULT_SELF_AVOIDING_MAX};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error(
        "neighbourhoods must be complete to distance {required}, only known below {available}"
    )]
    InsufficientRadius { required: usize, available: usize },
    #[error("walk counts for degree {k} up to length {n_max} overflow 128 bits")]
    Overflow { k: usize, n_max: usize },
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("at least one sample is required")]
    ZeroSamples,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
