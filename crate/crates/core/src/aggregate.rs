//! Encoding samples with a trained prototype book.
//!
//! A sample's representation is the mean over its descriptors of their
//! inner products with every prototype: `x̄ = (1/N_s) Σ_j x_jᵀ P`.

use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DMatrixView, DVector};
use rayon::prelude::*;

use crate::data::{
    build_group_weights, write_descriptor_file, DataError, DatasetParts, DescriptorDataset,
    PrototypeModel,
};
use crate::solver::{build_bundled_kernel, SolverError, SolverState, Trained};

#[derive(Debug, thiserror::Error)]
pub enum AggregateError {
    #[error("descriptor dimension {found} does not match model dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sample {index} has no descriptors")]
    EmptySample { index: usize },

    #[error("no selection matrix available (model was saved without it)")]
    MissingSelection,

    #[error("dataset has no label mask")]
    MissingMask,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Fixed-length global vector of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedRepresentation {
    pub vector: DVector<f64>,
    pub sample_id: String,
    /// The vector was scaled to unit ℓ2 norm (a zero vector stays zero).
    pub normalized: bool,
}

impl AggregatedRepresentation {
    pub fn new(vector: DVector<f64>, sample_id: impl Into<String>) -> Self {
        AggregatedRepresentation {
            vector,
            sample_id: sample_id.into(),
            normalized: false,
        }
    }

    pub fn normalize(mut self) -> Self {
        let n = self.vector.norm();
        if n > 0.0 {
            self.vector /= n;
        }
        self.normalized = true;
        self
    }
}

/// Anything that carries a trained selection matrix `Z*` (`N × d̄`).
pub trait SelectionSource {
    fn selection(&self) -> Option<&DMatrix<f64>>;
}

impl SelectionSource for DMatrix<f64> {
    fn selection(&self) -> Option<&DMatrix<f64>> {
        Some(self)
    }
}

impl SelectionSource for SolverState {
    fn selection(&self) -> Option<&DMatrix<f64>> {
        Some(&self.c)
    }
}

impl SelectionSource for PrototypeModel {
    fn selection(&self) -> Option<&DMatrix<f64>> {
        self.selection.as_ref().map(|s| s.z.as_matrix())
    }
}

impl SelectionSource for Trained {
    fn selection(&self) -> Option<&DMatrix<f64>> {
        Some(&self.state.c)
    }
}

/// `x̄ᵢ = 𝒢ᵢ Xᵀ X Z*` for every training sample, computed from the bundled
/// kernel rather than the cached prototype book.
pub fn aggregate_training<S: SelectionSource + ?Sized>(
    ds: &DescriptorDataset,
    source: &S,
) -> Result<Vec<AggregatedRepresentation>, AggregateError> {
    let z = source.selection().ok_or(AggregateError::MissingSelection)?;
    if z.nrows() != ds.n_descriptors() {
        return Err(AggregateError::Shape(format!(
            "selection has {} rows but the dataset has {} descriptors",
            z.nrows(),
            ds.n_descriptors()
        )));
    }
    let groups = build_group_weights(ds.partition())?;
    let k = build_bundled_kernel(ds, &groups, false)?;
    let xbar = k.to_dense() * z;
    Ok(xbar
        .row_iter()
        .enumerate()
        .map(|(i, row)| AggregatedRepresentation::new(row.transpose(), i.to_string()))
        .collect())
}

/// Encodes a new sample (`d × N_new`) with the stored prototype book.
pub fn aggregate_new(
    x_new: DMatrixView<'_, f64>,
    model: &PrototypeModel,
) -> Result<DVector<f64>, AggregateError> {
    encode_block(x_new, &model.prototype_book, 0)
}

fn encode_block(
    x: DMatrixView<'_, f64>,
    book: &DMatrix<f64>,
    index: usize,
) -> Result<DVector<f64>, AggregateError> {
    if x.nrows() != book.nrows() {
        return Err(AggregateError::DimensionMismatch {
            expected: book.nrows(),
            found: x.nrows(),
        });
    }
    if x.ncols() == 0 {
        return Err(AggregateError::EmptySample { index });
    }
    let mut mean = DVector::zeros(x.nrows());
    for col in x.column_iter() {
        mean += col;
    }
    mean /= x.ncols() as f64;
    Ok(book.tr_mul(&mean))
}

/// Encodes the listed samples of `ds` in parallel, keeping their order.
pub fn aggregate_samples(
    ds: &DescriptorDataset,
    samples: &[usize],
    model: &PrototypeModel,
) -> Result<Vec<AggregatedRepresentation>, AggregateError> {
    samples
        .par_iter()
        .map(|&i| {
            let v = encode_block(ds.sample(i), &model.prototype_book, i)?;
            Ok(AggregatedRepresentation::new(v, i.to_string()))
        })
        .collect()
}

/// Encodes every sample of `ds` with the prototype book.
pub fn aggregate_dataset(
    ds: &DescriptorDataset,
    model: &PrototypeModel,
) -> Result<Vec<AggregatedRepresentation>, AggregateError> {
    let all: Vec<usize> = (0..ds.n_samples()).collect();
    aggregate_samples(ds, &all, model)
}

/// Encodes the samples the label mask leaves unlabeled.
pub fn aggregate_unlabeled(
    ds: &DescriptorDataset,
    model: &PrototypeModel,
) -> Result<Vec<AggregatedRepresentation>, AggregateError> {
    let mask = ds.label_mask().ok_or(AggregateError::MissingMask)?;
    aggregate_unlabeled_with_mask(ds, mask, model)
}

/// Like [`aggregate_unlabeled`] with an explicit mask. Unlike a dataset's
/// stored mask, this one may be all `false`.
pub fn aggregate_unlabeled_with_mask(
    ds: &DescriptorDataset,
    mask: &[bool],
    model: &PrototypeModel,
) -> Result<Vec<AggregatedRepresentation>, AggregateError> {
    if mask.len() != ds.n_samples() {
        return Err(AggregateError::Shape(format!(
            "mask length {} differs from sample count {}",
            mask.len(),
            ds.n_samples()
        )));
    }
    let unlabeled: Vec<usize> = (0..mask.len()).filter(|&i| !mask[i]).collect();
    aggregate_samples(ds, &unlabeled, model)
}

/// Forward projection `x̄ W*`, one row per representation.
pub fn predict_responses(
    reps: &[AggregatedRepresentation],
    model: &PrototypeModel,
) -> Result<DMatrix<f64>, AggregateError> {
    let w = model.projection.as_matrix();
    let mut out = DMatrix::zeros(reps.len(), w.ncols());
    for (r, rep) in reps.iter().enumerate() {
        if rep.vector.len() != w.nrows() {
            return Err(AggregateError::Shape(format!(
                "representation {} has length {}, projection expects {}",
                rep.sample_id,
                rep.vector.len(),
                w.nrows()
            )));
        }
        out.row_mut(r).copy_from(&w.tr_mul(&rep.vector).transpose());
    }
    Ok(out)
}

/// Row-per-sample matrix of the representation vectors.
pub fn stack(reps: &[AggregatedRepresentation]) -> DMatrix<f64> {
    let d = reps.first().map_or(0, |r| r.vector.len());
    DMatrix::from_fn(reps.len(), d, |i, j| reps[i].vector[j])
}

/// CSV with a `sample_id,v1..` header. `comments` become leading `# ` lines.
pub fn write_representations_csv(
    reps: &[AggregatedRepresentation],
    path: impl AsRef<Path>,
    comments: &[String],
) -> Result<(), AggregateError> {
    let path = path.as_ref();
    let io = |source| AggregateError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    for line in comments {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let d = reps.first().map_or(0, |r| r.vector.len());
    let header: Vec<String> = std::iter::once("sample_id".to_string())
        .chain((1..=d).map(|j| format!("v{j}")))
        .collect();
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for rep in reps {
        write!(out, "{}", rep.sample_id).map_err(io)?;
        for v in rep.vector.iter() {
            write!(out, ",{v:e}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Binary export: a dataset with one descriptor (the representation) per
/// sample. `responses` rows must follow `reps`.
pub fn write_representations_binary(
    reps: &[AggregatedRepresentation],
    responses: Option<DMatrix<f64>>,
    path: impl AsRef<Path>,
) -> Result<(), AggregateError> {
    let ds = crate::data::validate_dataset(DatasetParts {
        descriptors: stack(reps).transpose(),
        partition: vec![1; reps.len()],
        responses,
        label_mask: None,
    })
    .map_err(DataError::from)?;
    write_descriptor_file(&ds, path)?;
    Ok(())
}
