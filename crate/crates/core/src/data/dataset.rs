use std::fmt;
use std::ops::Range;

use nalgebra::{DMatrix, DMatrixView};

/// Unvalidated dataset components, as read from disk or built by a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetParts {
    /// `d × N`; column `j` is descriptor `x_j`.
    pub descriptors: DMatrix<f64>,
    /// Sizes `N_1..N_m` of consecutive descriptor blocks.
    pub partition: Vec<usize>,
    /// `m × c`; row `i` is the response `y_i`.
    pub responses: Option<DMatrix<f64>>,
    /// `true` marks a labeled sample.
    pub label_mask: Option<Vec<bool>>,
}

/// One violated dataset invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetIssue {
    NoSamples,
    PartitionSum { sum: usize, n: usize },
    EmptySample { index: usize },
    NonFinite { field: &'static str, row: usize, col: usize },
    ResponseRows { rows: usize, m: usize },
    MaskLength { len: usize, m: usize },
    MaskWithoutLabels,
}

impl fmt::Display for DatasetIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetIssue::NoSamples => write!(f, "partition is empty"),
            DatasetIssue::PartitionSum { sum, n } => {
                write!(f, "partition sums to {sum} \u{2260} {n}")
            }
            DatasetIssue::EmptySample { index } => write!(f, "sample {index} has no descriptors"),
            DatasetIssue::NonFinite { field, row, col } => {
                write!(f, "non-finite entry in {field} at ({row}, {col})")
            }
            DatasetIssue::ResponseRows { rows, m } => {
                write!(f, "response rows {rows} \u{2260} m {m}")
            }
            DatasetIssue::MaskLength { len, m } => write!(f, "label mask length {len} \u{2260} m {m}"),
            DatasetIssue::MaskWithoutLabels => write!(f, "label mask marks no sample as labeled"),
        }
    }
}

/// Every invariant violation found in a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<DatasetIssue>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid dataset: ")?;
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

fn first_non_finite(m: &DMatrix<f64>) -> Option<(usize, usize)> {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_finite() {
                return Some((r, c));
            }
        }
    }
    None
}

/// Checks every dataset invariant and reports all violations at once.
pub fn validate_dataset(parts: DatasetParts) -> Result<DescriptorDataset, ValidationReport> {
    let mut issues = Vec::new();
    let n = parts.descriptors.ncols();
    let m = parts.partition.len();

    if m == 0 {
        issues.push(DatasetIssue::NoSamples);
    }
    let sum: usize = parts.partition.iter().sum();
    if sum != n {
        issues.push(DatasetIssue::PartitionSum { sum, n });
    }
    for (index, &size) in parts.partition.iter().enumerate() {
        if size == 0 {
            issues.push(DatasetIssue::EmptySample { index });
        }
    }
    if let Some((row, col)) = first_non_finite(&parts.descriptors) {
        issues.push(DatasetIssue::NonFinite {
            field: "descriptors",
            row,
            col,
        });
    }
    if let Some(y) = &parts.responses {
        if y.nrows() != m {
            issues.push(DatasetIssue::ResponseRows { rows: y.nrows(), m });
        }
        if let Some((row, col)) = first_non_finite(y) {
            issues.push(DatasetIssue::NonFinite {
                field: "responses",
                row,
                col,
            });
        }
    }
    if let Some(mask) = &parts.label_mask {
        if mask.len() != m {
            issues.push(DatasetIssue::MaskLength { len: mask.len(), m });
        }
        if !mask.iter().any(|&b| b) {
            issues.push(DatasetIssue::MaskWithoutLabels);
        }
    }

    if !issues.is_empty() {
        return Err(ValidationReport { issues });
    }

    let mut offsets = Vec::with_capacity(m + 1);
    offsets.push(0);
    for &size in &parts.partition {
        offsets.push(offsets.last().unwrap() + size);
    }
    Ok(DescriptorDataset { parts, offsets })
}

/// Local descriptors grouped into samples, with optional responses and
/// semi-supervised label mask. Immutable once validated.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorDataset {
    parts: DatasetParts,
    offsets: Vec<usize>,
}

impl DescriptorDataset {
    pub fn new(
        descriptors: DMatrix<f64>,
        partition: Vec<usize>,
        responses: Option<DMatrix<f64>>,
        label_mask: Option<Vec<bool>>,
    ) -> Result<Self, ValidationReport> {
        validate_dataset(DatasetParts {
            descriptors,
            partition,
            responses,
            label_mask,
        })
    }

    /// Descriptor dimension `d`.
    pub fn dim(&self) -> usize {
        self.parts.descriptors.nrows()
    }

    /// Total descriptor count `N`.
    pub fn n_descriptors(&self) -> usize {
        self.parts.descriptors.ncols()
    }

    /// Sample count `m`.
    pub fn n_samples(&self) -> usize {
        self.parts.partition.len()
    }

    /// Response width `c`, zero without responses.
    pub fn n_outputs(&self) -> usize {
        self.parts.responses.as_ref().map_or(0, |y| y.ncols())
    }

    pub fn descriptors(&self) -> &DMatrix<f64> {
        &self.parts.descriptors
    }

    pub fn partition(&self) -> &[usize] {
        &self.parts.partition
    }

    pub fn responses(&self) -> Option<&DMatrix<f64>> {
        self.parts.responses.as_ref()
    }

    pub fn label_mask(&self) -> Option<&[bool]> {
        self.parts.label_mask.as_deref()
    }

    pub fn parts(&self) -> &DatasetParts {
        &self.parts
    }

    pub fn into_parts(self) -> DatasetParts {
        self.parts
    }

    /// Column range of sample `i` inside the descriptor matrix.
    pub fn sample_range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Descriptor block `X_i` (`d × N_i`).
    pub fn sample(&self, i: usize) -> DMatrixView<'_, f64> {
        let r = self.sample_range(i);
        self.parts.descriptors.columns(r.start, r.len())
    }

    /// Class index per sample, taken as the argmax of each response row.
    pub fn labels(&self) -> Option<Vec<usize>> {
        let y = self.parts.responses.as_ref()?;
        Some(
            y.row_iter()
                .map(|row| {
                    let mut best = 0;
                    for k in 1..row.len() {
                        if row[k] > row[best] {
                            best = k;
                        }
                    }
                    best
                })
                .collect(),
        )
    }

    /// Indices of the samples marked labeled by the mask.
    pub fn labeled_indices(&self) -> Option<Vec<usize>> {
        let mask = self.label_mask()?;
        Some(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn with_label_mask(&self, mask: Option<Vec<bool>>) -> Result<Self, ValidationReport> {
        let mut parts = self.parts.clone();
        parts.label_mask = mask;
        validate_dataset(parts)
    }

    /// New dataset made of the listed samples, in the given order.
    pub fn subset(&self, samples: &[usize]) -> Result<Self, ValidationReport> {
        let d = self.dim();
        let total: usize = samples.iter().map(|&i| self.parts.partition[i]).sum();
        let mut x = DMatrix::zeros(d, total);
        let mut col = 0;
        let mut partition = Vec::with_capacity(samples.len());
        for &i in samples {
            let block = self.sample(i);
            x.columns_mut(col, block.ncols()).copy_from(&block);
            col += block.ncols();
            partition.push(block.ncols());
        }
        let responses = self
            .parts
            .responses
            .as_ref()
            .map(|y| DMatrix::from_fn(samples.len(), y.ncols(), |r, c| y[(samples[r], c)]));
        let label_mask = self
            .parts
            .label_mask
            .as_ref()
            .map(|mask| samples.iter().map(|&i| mask[i]).collect::<Vec<_>>())
            .filter(|mask| mask.iter().any(|&b| b));
        validate_dataset(DatasetParts {
            descriptors: x,
            partition,
            responses,
            label_mask,
        })
    }

    /// Copy with every descriptor scaled to unit ℓ2 norm (zero columns kept).
    pub fn l2_normalized(&self) -> Self {
        let mut parts = self.parts.clone();
        for mut col in parts.descriptors.column_iter_mut() {
            let norm = col.norm();
            if norm > 0.0 {
                col /= norm;
            }
        }
        DescriptorDataset {
            parts,
            offsets: self.offsets.clone(),
        }
    }
}

/// One-hot response matrix (`labels.len() × n_classes`).
pub fn one_hot(labels: &[usize], n_classes: usize) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(labels.len(), n_classes);
    for (i, &l) in labels.iter().enumerate() {
        y[(i, l)] = 1.0;
    }
    y
}
