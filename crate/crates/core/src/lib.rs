//! Prototype-selection local feature aggregation.
//!
//! A set of local descriptors per sample is aggregated into one fixed-length
//! vector by pooling the descriptors' inner products against a small book of
//! prototypes. Each prototype is a convex combination of training
//! descriptors, chosen jointly with a linear projection onto the task's
//! response space:
//!
//! ```text
//!   x̄ᵢ = 𝒢ᵢ Xᵀ X Z          (pool ∘ encode ∘ prototypes)
//!   min  Σᵢ ‖x̄ᵢW − yᵢ‖² + ‖x̄ᵢ − yᵢWᵀ‖² + λ₁(‖Z‖²₁,₂ − ‖Z‖²_F) + λ₂‖W‖²_F
//!   s.t. 1ᵀZ = 1ᵀ, Z ≥ 0
//! ```
//!
//! The problem is solved by block coordinate descent: an ADMM inner solver
//! for the selection matrix `Z` and a Sylvester solve for the projection `W`.
//!
//! Module map:
//!
//! - [`data`]: datasets, group weights, hyperparameters, binary/CSV formats and
//!   the persisted [`PrototypeModel`](data::PrototypeModel).
//! - [`numerics`]: simplex projection, Sylvester solver, spectral bounds,
//!   finite differences.
//! - [`solver`]: objective, ADMM Z/C solver, W step, the training loops.
//! - [`aggregate`]: encoding training, new and unlabeled samples.
//! - [`eval`]: synthetic data, k-NN, mAP, k-means baseline, sweeps, timing.
//! - [`cli`]: the command-line front end used by the `prolfa` binary.

pub mod aggregate;
pub mod cli;
pub mod data;
pub mod eval;
pub mod numerics;
pub mod solver;

pub use aggregate::{
    aggregate_new, aggregate_training, aggregate_unlabeled, predict_responses,
    AggregatedRepresentation,
};
pub use data::{
    build_group_weights, validate_dataset, DatasetParts, DescriptorDataset, GroupWeights,
    Hyperparameters, PrototypeModel,
};
pub use solver::{train, train_semi, SolverState, Trained};
