//! Linearized (projected gradient) update of the simplex copy `C`.

use nalgebra::DMatrix;

use super::{BundledKernel, SolverError};
use crate::numerics::{project_columns_to_simplex, spectral_norm_upper_bound};

/// `ℒ(C) = Σᵢ ‖KᵢCW − yᵢ‖² + ‖KᵢC − yᵢWᵀ‖² + μ/2 ‖Z − C‖² + ⟨Λ, Z − C⟩`.
#[allow(clippy::too_many_arguments)]
pub fn lagrangian_c(
    c: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
    mu: f64,
) -> Result<f64, SolverError> {
    let fit = super::regression_loss(c, w, k, y)?;
    let diff = z - c;
    Ok(fit + 0.5 * mu * diff.norm_squared() + lambda.dot(&diff))
}

/// `∇ℒ(C) = 2Kᵀ(KCW − Y)Wᵀ + 2Kᵀ(KC − YWᵀ) + μ(C − Z) − Λ`.
pub fn grad_l_wrt_c(
    c: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
    mu: f64,
) -> Result<DMatrix<f64>, SolverError> {
    if c.shape() != z.shape() || c.shape() != lambda.shape() {
        return Err(SolverError::Shape("C, Z and Λ must share a shape".into()));
    }
    if c.nrows() != k.n_cols() || w.nrows() != c.ncols() || y.nrows() != k.n_rows() || y.ncols() != w.ncols() {
        return Err(SolverError::Shape("gradient operands are inconsistent".into()));
    }
    let xbar = k.apply(c);
    let inner = (&xbar * w - y) * w.transpose() + (&xbar - y * w.transpose());
    let mut g = k.apply_transpose(&inner) * 2.0;
    g += (c - z) * mu;
    g -= lambda;
    Ok(g)
}

/// `L = 2 λ̂(KᵀK) (1 + σ̂(W)²) + μ`, an upper bound on the Lipschitz constant
/// of `∇ℒ`.
pub fn lipschitz_bound(k: &BundledKernel, w: &DMatrix<f64>, mu: f64) -> Result<f64, SolverError> {
    let sigma_sq = spectral_norm_upper_bound(&(w.transpose() * w))?;
    Ok(2.0 * k.gram_bound() * (1.0 + sigma_sq) + mu)
}

/// One projected gradient step `C' = Π(C − ∇ℒ(C)/L)`, column-wise onto the
/// probability simplex.
#[allow(clippy::too_many_arguments)]
pub fn update_c(
    c: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: &DMatrix<f64>,
    w: &DMatrix<f64>,
    k: &BundledKernel,
    y: &DMatrix<f64>,
    mu: f64,
    lipschitz: f64,
) -> Result<DMatrix<f64>, SolverError> {
    let g = grad_l_wrt_c(c, z, lambda, w, k, y, mu)?;
    let step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 1.0 };
    Ok(project_columns_to_simplex(&(c - g * step))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> BundledKernel {
        BundledKernel::from_dense(DMatrix::from_fn(2, 4, |r, c| ((r * 4 + c) as f64 * 0.7).sin())).unwrap()
    }

    fn feasible() -> DMatrix<f64> {
        DMatrix::from_row_slice(4, 2, &[0.1, 0.4, 0.2, 0.3, 0.3, 0.2, 0.4, 0.1])
    }

    #[test]
    fn surviving_term_with_zero_w_and_y() {
        let k = kernel();
        let c = feasible();
        let g = grad_l_wrt_c(&c, &c, &DMatrix::zeros(4, 2), &DMatrix::zeros(2, 1), &k, &DMatrix::zeros(2, 1), 1.0)
            .unwrap();
        let kd = k.to_dense();
        let expected = kd.transpose() * &kd * &c * 2.0;
        assert!((g - expected).amax() < 1e-12);
    }

    #[test]
    fn mu_term_isolated() {
        let k = BundledKernel::from_dense(DMatrix::zeros(2, 4)).unwrap();
        let c = feasible();
        let z = DMatrix::from_element(4, 2, 0.25);
        let g = grad_l_wrt_c(&c, &z, &DMatrix::zeros(4, 2), &DMatrix::zeros(2, 1), &k, &DMatrix::zeros(2, 1), 3.0)
            .unwrap();
        assert!((g - (&c - &z) * 3.0).amax() < 1e-15);
    }

    #[test]
    fn lipschitz_trivial_cases() {
        let zero = BundledKernel::from_dense(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(lipschitz_bound(&zero, &DMatrix::zeros(2, 1), 0.7).unwrap(), 0.7);
        let eye = BundledKernel::from_dense(DMatrix::identity(3, 3)).unwrap();
        let l = lipschitz_bound(&eye, &DMatrix::zeros(2, 1), 0.0).unwrap();
        assert!((2.0..=2.0 * 1.03).contains(&l), "{l}");
    }

    #[test]
    fn stationary_point_is_fixed() {
        let k = BundledKernel::from_dense(DMatrix::zeros(2, 4)).unwrap();
        let z = feasible();
        let c2 = update_c(&z, &z, &DMatrix::zeros(4, 2), &DMatrix::zeros(2, 1), &k, &DMatrix::zeros(2, 1), 1.0, 1.0)
            .unwrap();
        assert!((c2 - &z).amax() < 1e-15);
    }
}
