use nalgebra::{DMatrix, DVector};

use super::NumericsError;

const SAFETY: f64 = 1.01;
const REL_TOL: f64 = 1e-9;
const MAX_ITER: usize = 5000;

fn power_iteration(m: &DMatrix<f64>, start: DVector<f64>) -> f64 {
    let mut v = start.normalize();
    let mut estimate = 0.0;
    for _ in 0..MAX_ITER {
        let mv = m * &v;
        let next = v.dot(&mv);
        let norm = mv.norm();
        if norm == 0.0 {
            return next.max(0.0);
        }
        v = mv / norm;
        if (next - estimate).abs() <= REL_TOL * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Upper bound on the largest eigenvalue of a symmetric PSD matrix.
///
/// Power iteration from the normalized all-ones vector, plus a second
/// deterministic start so a start orthogonal to the top eigenvector cannot
/// stall the estimate. The larger Rayleigh quotient is inflated by 1%, then
/// capped by the trace (itself a bound for PSD input).
pub fn spectral_norm_upper_bound(m: &DMatrix<f64>) -> Result<f64, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::Dimension(format!(
            "spectral bound of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite("spectral bound input"));
    }
    let n = m.nrows();
    if n == 0 || m.amax() == 0.0 {
        return Ok(0.0);
    }
    let ones = DVector::from_element(n, 1.0);
    // Weyl sequence: deterministic and generic.
    let golden = DVector::from_fn(n, |i, _| {
        let phi = 0.618_033_988_749_894_9 * (i + 1) as f64;
        (phi - phi.floor()) - 0.5
    });
    let estimate = power_iteration(m, ones).max(power_iteration(m, golden));
    Ok((SAFETY * estimate).min(m.trace()).max(0.0))
}
