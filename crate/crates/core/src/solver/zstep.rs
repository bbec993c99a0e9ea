//! Row-wise re-weighted solve of the `Z` subproblem.

/// Diagonal of the re-weighting matrix `F` for one row of `Z`:
/// `F(k) = ‖z‖₁ / (|z(k)| + ε) − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReweightDiagonal(pub Vec<f64>);

impl ReweightDiagonal {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Denominator floor for `μ + 2λ₁F(k)`.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

pub fn update_reweight_diag(z_row: &[f64], eps: f64) -> ReweightDiagonal {
    let l1: f64 = z_row.iter().map(|v| v.abs()).sum();
    ReweightDiagonal(z_row.iter().map(|v| l1 / (v.abs() + eps) - 1.0).collect())
}

/// `Z_row(k) = (μ C_row(k) − Λ_row(k)) / (μ + 2λ₁ F(k))`, writing into `out`.
/// Returns how many denominators had to be clamped to the floor.
pub fn update_z_row(
    c_row: &[f64],
    lambda_row: &[f64],
    f: &ReweightDiagonal,
    mu: f64,
    lambda1: f64,
    out: &mut [f64],
) -> usize {
    let mut clamped = 0;
    for k in 0..out.len() {
        let mut denom = mu + 2.0 * lambda1 * f.0[k];
        if denom <= DENOMINATOR_FLOOR {
            denom = DENOMINATOR_FLOOR;
            clamped += 1;
        }
        out[k] = (mu * c_row[k] - lambda_row[k]) / denom;
    }
    clamped
}

/// Row subproblem value `λ₁(‖z‖₁² − ‖z‖²) + μ/2 ‖z − c‖² + ⟨Λ_row, z − c⟩`.
pub fn row_objective(z: &[f64], c: &[f64], lambda_row: &[f64], mu: f64, lambda1: f64) -> f64 {
    let l1: f64 = z.iter().map(|v| v.abs()).sum();
    let sq: f64 = z.iter().map(|v| v * v).sum();
    let mut prox = 0.0;
    let mut lin = 0.0;
    for k in 0..z.len() {
        let d = z[k] - c[k];
        prox += d * d;
        lin += lambda_row[k] * d;
    }
    lambda1 * (l1 * l1 - sq) + 0.5 * mu * prox + lin
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowSolve {
    pub z: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
    pub clamped: usize,
}

/// Alternates `F` and `Z_row` updates from `start` until the row moves by at
/// most `tol` in the max norm, or `max_iter` sweeps. The last iterate is
/// returned either way; `converged` tells which.
#[allow(clippy::too_many_arguments)]
pub fn solve_z_row(
    start: &[f64],
    c_row: &[f64],
    lambda_row: &[f64],
    mu: f64,
    lambda1: f64,
    eps: f64,
    tol: f64,
    max_iter: u32,
) -> RowSolve {
    let mut z = start.to_vec();
    let mut next = vec![0.0; z.len()];
    let mut clamped = 0;
    for it in 1..=max_iter {
        let f = update_reweight_diag(&z, eps);
        clamped += update_z_row(c_row, lambda_row, &f, mu, lambda1, &mut next);
        let delta = z
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut z, &mut next);
        if delta <= tol {
            return RowSolve {
                z,
                iterations: it,
                converged: true,
                clamped,
            };
        }
    }
    RowSolve {
        z,
        iterations: max_iter,
        converged: false,
        clamped,
    }
}
