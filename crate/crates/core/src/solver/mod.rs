//! Composite block coordinate descent for the prototype-selection model.
//!
//! Outer loop: an ADMM solve for the selection block (`Z` with its simplex
//! copy `C` and multiplier `Λ`), then a Sylvester solve for the projection
//! `W`. See [`train`] and [`train_semi`].

mod admm;
mod cstep;
mod kernel;
mod objective;
mod train;
mod wstep;
mod zstep;

pub use admm::{admm_solve_z, update_multiplier, AdmmOutcome};
pub use cstep::{grad_l_wrt_c, lagrangian_c, lipschitz_bound, update_c};
pub use kernel::{build_bundled_kernel, BundledKernel};
pub use objective::{exclusivity_penalty, objective, regression_loss};
pub use train::{
    initial_selection, train, train_semi, AdmmRecord, OuterRecord, SolverState, Trained,
};
pub use wstep::{update_w, w_subproblem_gradient, w_subproblem_objective, WSystem};
pub use zstep::{row_objective, solve_z_row, update_reweight_diag, update_z_row, ReweightDiagonal, RowSolve};

use crate::data::DataError;
use crate::numerics::NumericsError;

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Data(#[from] DataError),

    #[error(transparent)]
    Numerics(#[from] NumericsError),

    #[error("training needs responses for every sample")]
    MissingResponses,

    #[error("semi-supervised mode needs a label mask")]
    MissingMask,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("objective became non-finite ({value}) at outer iteration {outer}")]
    NonFiniteObjective { outer: usize, value: f64 },
}
