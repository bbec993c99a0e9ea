use nalgebra::DMatrix;

use super::{BundledKernel, SolverError};

/// `‖Z‖²₁,₂ − ‖Z‖²_F = Σᵢ(Σⱼ|zᵢⱼ|)² − Σᵢⱼ zᵢⱼ²`, the relaxed exclusivity
/// between columns. Zero exactly when no row has two nonzeros.
pub fn exclusivity_penalty(z: &DMatrix<f64>) -> f64 {
    let mut total = 0.0;
    for r in 0..z.nrows() {
        let mut l1 = 0.0;
        let mut sq = 0.0;
        for c in 0..z.ncols() {
            let v = z[(r, c)];
            l1 += v.abs();
            sq += v * v;
        }
        total += l1 * l1 - sq;
    }
    total
}

fn check_shapes(
    sel: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
) -> Result<(), SolverError> {
    if sel.nrows() != k.n_cols() {
        return Err(SolverError::Shape(format!(
            "selection has {} rows, kernel has {} columns",
            sel.nrows(),
            k.n_cols()
        )));
    }
    if w.nrows() != sel.ncols() || w.ncols() != y.ncols() || y.nrows() != k.n_rows() {
        return Err(SolverError::Shape(format!(
            "W is {}x{}, Y is {}x{}, expected {}x{} and {}x{}",
            w.nrows(),
            w.ncols(),
            y.nrows(),
            y.ncols(),
            sel.ncols(),
            y.ncols(),
            k.n_rows(),
            w.ncols()
        )));
    }
    Ok(())
}

/// Forward plus reverse regression loss `Σᵢ ‖KᵢZW − yᵢ‖² + ‖KᵢZ − yᵢWᵀ‖²`.
pub fn regression_loss(
    z: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
) -> Result<f64, SolverError> {
    check_shapes(z, w, k, y)?;
    let xbar = k.apply(z);
    let forward = (&xbar * w - y).norm_squared();
    let reverse = (&xbar - y * w.transpose()).norm_squared();
    Ok(forward + reverse)
}

/// Full objective `𝒥(Z, W)`.
pub fn objective(
    z: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
    lambda1: f64,
    lambda2: f64,
) -> Result<f64, SolverError> {
    Ok(regression_loss(z, w, k, y)? + lambda1 * exclusivity_penalty(z) + lambda2 * w.norm_squared())
}
