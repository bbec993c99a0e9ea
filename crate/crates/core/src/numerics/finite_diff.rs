use nalgebra::DMatrix;

/// Central-difference gradient of a scalar function of a matrix:
/// `(f(X₀ + hEᵢⱼ) − f(X₀ − hEᵢⱼ)) / 2h` for every entry.
pub fn finite_difference_gradient<F>(f: F, x0: &DMatrix<f64>, h: f64) -> DMatrix<f64>
where
    F: Fn(&DMatrix<f64>) -> f64,
{
    let mut x = x0.clone();
    let mut grad = DMatrix::zeros(x0.nrows(), x0.ncols());
    for j in 0..x0.ncols() {
        for i in 0..x0.nrows() {
            let orig = x[(i, j)];
            x[(i, j)] = orig + h;
            let up = f(&x);
            x[(i, j)] = orig - h;
            let down = f(&x);
            x[(i, j)] = orig;
            grad[(i, j)] = (up - down) / (2.0 * h);
        }
    }
    grad
}
