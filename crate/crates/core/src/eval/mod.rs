//! Desk-scale evaluation harness: synthetic data, k-NN and retrieval
//! scoring, a k-means bag-of-words baseline, sweeps and timing.

mod kmeans;
mod knn;
mod map;
mod split;
mod sweep;
mod synthetic;

pub use kmeans::{bow_histograms, kmeans, kmeans_bow_baseline, Codebook, KMEANS_MAX_ITER};
pub use knn::{accuracy, knn_classify, DistanceFn, Metric};
pub use map::{average_precision, leave_one_out_map, mean_average_precision, rank_database, MapResult};
pub use split::{
    evaluate_once, evaluate_split, mean_std, repetition_seed, stratified_split, Encoder, EvalReport,
    Protocol, Task,
};
pub use sweep::{
    linear_fit, run_sweep, run_timing_benchmark, write_sweep_csv, write_timing_csv, SweepGrid,
    SweepPoint, TimingRow, TimingTable,
};
pub use synthetic::{generate_synthetic, SyntheticSpec};

use crate::aggregate::AggregateError;
use crate::data::{DataError, ValidationReport};
use crate::solver::SolverError;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error(transparent)]
    Aggregate(#[from] AggregateError),

    #[error("{0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<ValidationReport> for EvalError {
    fn from(r: ValidationReport) -> Self {
        EvalError::Data(DataError::Invalid(r))
    }
}
