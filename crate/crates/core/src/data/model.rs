use std::path::Path;

use nalgebra::DMatrix;

use super::format::{read_model_file, write_model_file};
use super::{DataError, Hyperparameters};

/// Relative Frobenius tolerance for `P = X Z*` at save time.
pub const BOOK_TOLERANCE: f64 = 1e-10;

/// `N × d̄` matrix whose columns lie on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionMatrix(DMatrix<f64>);

impl SelectionMatrix {
    /// Entry floor tolerated for transient negatives.
    pub const NEG_TOL: f64 = 1e-9;
    /// Column-sum tolerance.
    pub const SUM_TOL: f64 = 1e-6;

    pub fn new(m: DMatrix<f64>) -> Result<Self, DataError> {
        for (j, col) in m.column_iter().enumerate() {
            if let Some(v) = col.iter().find(|v| !v.is_finite() || **v < -Self::NEG_TOL) {
                return Err(DataError::Model(format!(
                    "selection column {j} has entry {v} outside [0, inf)"
                )));
            }
            let s = col.sum();
            if (s - 1.0).abs() > Self::SUM_TOL {
                return Err(DataError::Model(format!("selection column {j} sums to {s}")));
            }
        }
        Ok(SelectionMatrix(m))
    }

    /// Uniform `1/N` in every entry.
    pub fn uniform(n: usize, d_bar: usize) -> Self {
        SelectionMatrix(DMatrix::from_element(n, d_bar, 1.0 / n as f64))
    }

    pub(crate) fn new_unchecked(m: DMatrix<f64>) -> Self {
        SelectionMatrix(m)
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Row index of the largest entry of each column.
    pub fn argmax_per_column(&self) -> Vec<u32> {
        self.0.column_iter().map(|c| c.imax() as u32).collect()
    }
}

/// `d̄ × c` projection between aggregated features and responses.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix(DMatrix<f64>);

impl ProjectionMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, DataError> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(DataError::Model("projection has non-finite entries".into()));
        }
        Ok(ProjectionMatrix(m))
    }

    pub fn zeros(d_bar: usize, c: usize) -> Self {
        ProjectionMatrix(DMatrix::zeros(d_bar, c))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// Optional interpretability payload: the full relaxed selection and the
/// descriptor each prototype leans on most.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub z: SelectionMatrix,
    pub argmax: Vec<u32>,
}

impl Selection {
    pub fn new(z: SelectionMatrix) -> Self {
        let argmax = z.argmax_per_column();
        Selection { z, argmax }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelMeta {
    pub dim: usize,
    pub n_descriptors: usize,
    pub n_samples: usize,
    pub n_outputs: usize,
}

/// Trained artifact. Encoding needs only `prototype_book`, never the
/// training descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeModel {
    /// `P = X Z*` (`d × d̄`).
    pub prototype_book: DMatrix<f64>,
    pub projection: ProjectionMatrix,
    pub hyper: Hyperparameters,
    /// Objective value at the end of training.
    pub final_objective: f64,
    pub selection: Option<Selection>,
    pub meta: ModelMeta,
}

impl PrototypeModel {
    pub fn d_bar(&self) -> usize {
        self.prototype_book.ncols()
    }

    /// Checks the structural invariants, and `P = X Z*` when both the
    /// selection and the training descriptors are available.
    pub fn check(&self, training: Option<&DMatrix<f64>>) -> Result<(), DataError> {
        let d_bar = self.d_bar();
        if self.prototype_book.nrows() != self.meta.dim {
            return Err(DataError::Model(format!(
                "prototype book has {} rows, metadata says d = {}",
                self.prototype_book.nrows(),
                self.meta.dim
            )));
        }
        if d_bar != self.hyper.d_bar {
            return Err(DataError::Model(format!(
                "prototype book has {d_bar} columns, hyperparameters say d_bar = {}",
                self.hyper.d_bar
            )));
        }
        let w = self.projection.as_matrix();
        if w.nrows() != d_bar || w.ncols() != self.meta.n_outputs {
            return Err(DataError::Model(format!(
                "projection is {}x{}, expected {d_bar}x{}",
                w.nrows(),
                w.ncols(),
                self.meta.n_outputs
            )));
        }
        if let Some(sel) = &self.selection {
            let z = sel.z.as_matrix();
            if z.nrows() != self.meta.n_descriptors || z.ncols() != d_bar {
                return Err(DataError::Model(format!(
                    "selection is {}x{}, expected {}x{d_bar}",
                    z.nrows(),
                    z.ncols(),
                    self.meta.n_descriptors
                )));
            }
            if sel.argmax.len() != d_bar {
                return Err(DataError::Model("argmax list length differs from d_bar".into()));
            }
            if let Some(x) = training {
                let rebuilt = x * z;
                let err = (&rebuilt - &self.prototype_book).norm()
                    / rebuilt.norm().max(f64::MIN_POSITIVE);
                if !(err <= BOOK_TOLERANCE) {
                    return Err(DataError::Model(format!(
                        "prototype book differs from X Z* (relative error {err:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Writes a model. When the model carries its selection matrix, the training
/// descriptors must be supplied so `P = X Z*` can be verified first.
pub fn save_model(
    model: &PrototypeModel,
    path: impl AsRef<Path>,
    training: Option<&DMatrix<f64>>,
) -> Result<(), DataError> {
    if model.selection.is_some() && training.is_none() {
        return Err(DataError::Model(
            "a model with a stored selection needs its training descriptors to be saved".into(),
        ));
    }
    model.check(training)?;
    write_model_file(model, path)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<PrototypeModel, DataError> {
    let model = read_model_file(path)?;
    model.check(None)?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_rejects_off_simplex_columns() {
        assert!(SelectionMatrix::new(DMatrix::from_column_slice(2, 1, &[0.7, 0.7])).is_err());
        assert!(SelectionMatrix::new(DMatrix::from_column_slice(2, 1, &[1.1, -0.1])).is_err());
        assert!(SelectionMatrix::new(DMatrix::from_column_slice(2, 1, &[1.0, -1e-10])).is_ok());
    }

    #[test]
    fn argmax_reports_dominant_descriptor() {
        let z = SelectionMatrix::new(DMatrix::from_column_slice(3, 2, &[0.2, 0.7, 0.1, 0.9, 0.0, 0.1]))
            .unwrap();
        assert_eq!(z.argmax_per_column(), vec![1, 0]);
    }
}
