use nalgebra::DMatrix;
use rayon::prelude::*;

use super::NumericsError;

/// Point of the probability simplex `{w : w ≥ 0, 1ᵀw = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Euclidean projection onto the probability simplex, sort-and-threshold
/// rule: with `u` sorted descending, `ρ = max{j : u_j > (Σ_{i≤j} u_i − 1)/j}`
/// and `w = max(v − θ, 0)` for `θ = (Σ_{i≤ρ} u_i − 1)/ρ`.
pub fn project_to_simplex(v: &[f64]) -> Result<SimplexVector, NumericsError> {
    let mut out = v.to_vec();
    project_in_place(&mut out)?;
    Ok(SimplexVector(out))
}

fn project_in_place(v: &mut [f64]) -> Result<(), NumericsError> {
    if v.is_empty() {
        return Err(NumericsError::Empty("simplex projection"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(NumericsError::NonFinite("simplex projection input"));
    }
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj > t {
            theta = t;
        } else {
            break;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    Ok(())
}

/// Projects every column of `m` independently. Column-parallel; the result
/// does not depend on the worker count.
pub fn project_columns_to_simplex(m: &DMatrix<f64>) -> Result<DMatrix<f64>, NumericsError> {
    let k = m.nrows();
    if k == 0 {
        return Err(NumericsError::Empty("column projection"));
    }
    let mut out = m.clone();
    out.as_mut_slice()
        .par_chunks_mut(k)
        .enumerate()
        .try_for_each(|(index, col)| {
            project_in_place(col).map_err(|e| NumericsError::Column {
                index,
                source: Box::new(e),
            })
        })?;
    Ok(out)
}
