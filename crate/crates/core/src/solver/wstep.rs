use nalgebra::DMatrix;

use super::{BundledKernel, SolverError};
use crate::numerics::solve_sylvester;

/// Coefficients of `A W + W B = Q` for the projection update, with
/// `x̄ = K C`: `A = x̄ᵀx̄ + λ₂I`, `B = YᵀY`, `Q = 2x̄ᵀY`.
#[derive(Debug, Clone)]
pub struct WSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub q: DMatrix<f64>,
}

impl WSystem {
    pub fn new(xbar: &DMatrix<f64>, y: &DMatrix<f64>, lambda2: f64) -> Result<Self, SolverError> {
        if xbar.nrows() != y.nrows() {
            return Err(SolverError::Shape(format!(
                "{} aggregated rows against {} responses",
                xbar.nrows(),
                y.nrows()
            )));
        }
        let d_bar = xbar.ncols();
        let a = xbar.tr_mul(xbar) + DMatrix::identity(d_bar, d_bar) * lambda2;
        let b = y.tr_mul(y);
        let q = xbar.tr_mul(y) * 2.0;
        Ok(WSystem { a, b, q })
    }
}

/// Closed-form projection update for fixed `C`.
pub fn update_w(
    k: &BundledKernel,
    c: &DMatrix<f64>,
    y: &DMatrix<f64>,
    lambda2: f64,
) -> Result<DMatrix<f64>, SolverError> {
    let sys = WSystem::new(&k.apply(c), y, lambda2)?;
    Ok(solve_sylvester(&sys.a, &sys.b, &sys.q)?)
}

/// `Σᵢ ‖x̄ᵢW − yᵢ‖² + ‖x̄ᵢ − yᵢWᵀ‖² + λ₂‖W‖²_F` for fixed aggregates.
pub fn w_subproblem_objective(xbar: &DMatrix<f64>, y: &DMatrix<f64>, w: &DMatrix<f64>, lambda2: f64) -> f64 {
    (xbar * w - y).norm_squared() + (xbar - y * w.transpose()).norm_squared() + lambda2 * w.norm_squared()
}

/// Gradient of [`w_subproblem_objective`]: `2(AW + WB − Q)`.
pub fn w_subproblem_gradient(xbar: &DMatrix<f64>, y: &DMatrix<f64>, w: &DMatrix<f64>, lambda2: f64) -> DMatrix<f64> {
    let forward = xbar.tr_mul(&(xbar * w - y));
    let reverse = (w * y.transpose() - xbar.transpose()) * y;
    (forward + reverse + w * lambda2) * 2.0
}
