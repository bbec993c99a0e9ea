use nalgebra::{DMatrix, SymmetricEigen};

use super::NumericsError;

/// Relative asymmetry tolerated in the Sylvester coefficients.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

const REFINEMENT_STEPS: usize = 2;

fn check_symmetric(m: &DMatrix<f64>, which: &'static str) -> Result<DMatrix<f64>, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::Dimension(format!(
            "{which} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite(which));
    }
    let scale = m.amax().max(1.0);
    let asymmetry = (m - m.transpose()).amax();
    if asymmetry > SYMMETRY_TOLERANCE * scale {
        return Err(NumericsError::NotSymmetric { which, asymmetry });
    }
    Ok((m + m.transpose()) * 0.5)
}

/// `‖A W + W B − Q‖_F`.
pub fn sylvester_residual(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    (a * w + w * b - q).norm()
}

/// Solves `A W + W B = Q` for symmetric `A` (`d̄ × d̄`) and `B` (`c × c`).
///
/// Both coefficients are diagonalized (`A = U diag(α) Uᵀ`, `B = V diag(β) Vᵀ`),
/// so the system decouples into `W̃ᵢⱼ (αᵢ + βⱼ) = (UᵀQV)ᵢⱼ`. Two rounds of
/// iterative refinement on the residual follow. Unique whenever no
/// `αᵢ + βⱼ` vanishes, which holds for SPD `A` and PSD `B`.
pub fn solve_sylvester(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
) -> Result<DMatrix<f64>, NumericsError> {
    let a = check_symmetric(a, "A")?;
    let b = check_symmetric(b, "B")?;
    if q.nrows() != a.nrows() || q.ncols() != b.nrows() {
        return Err(NumericsError::Dimension(format!(
            "Q is {}x{}, expected {}x{}",
            q.nrows(),
            q.ncols(),
            a.nrows(),
            b.nrows()
        )));
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite("Q"));
    }
    if q.is_empty() {
        return Ok(q.clone());
    }

    let ea = SymmetricEigen::new(a.clone());
    let eb = SymmetricEigen::new(b.clone());
    let scale = ea.eigenvalues.amax().max(eb.eigenvalues.amax()).max(1.0);
    let mut denom = DMatrix::zeros(a.nrows(), b.nrows());
    for i in 0..a.nrows() {
        for j in 0..b.nrows() {
            let sum = ea.eigenvalues[i] + eb.eigenvalues[j];
            if sum.abs() <= 1e-13 * scale {
                return Err(NumericsError::Singular { sum });
            }
            denom[(i, j)] = sum;
        }
    }

    let (u, v) = (&ea.eigenvectors, &eb.eigenvectors);
    let solve = |rhs: &DMatrix<f64>| -> DMatrix<f64> {
        let t = u.transpose() * rhs * v;
        u * t.component_div(&denom) * v.transpose()
    };

    let mut w = solve(q);
    for _ in 0..REFINEMENT_STEPS {
        let r = q - (&a * &w + &w * &b);
        w += solve(&r);
    }
    Ok(w)
}
