use nalgebra::DMatrix;

use super::SolverError;
use crate::data::{DescriptorDataset, GroupWeights};
use crate::numerics::spectral_norm_upper_bound;

#[derive(Debug, Clone)]
enum Repr {
    /// `K = Mᵀ X` with `M` the pooled (mean) descriptors of the kernel rows.
    Factored { means: DMatrix<f64>, x: DMatrix<f64> },
    Dense(DMatrix<f64>),
}

/// Bundled kernel `K` (`n × N`): row `i` is `𝒢ᵢ Xᵀ X`, the mean inner
/// product of sample `i`'s descriptors with every descriptor.
///
/// Kept factored as `Mᵀ X` so products with `K` and `Kᵀ` cost `O(dN)` per
/// column instead of `O(nN)`.
#[derive(Debug, Clone)]
pub struct BundledKernel {
    repr: Repr,
    /// Upper bound on `λ_max(K Kᵀ) = λ_max(Kᵀ K)`.
    gram_bound: f64,
}

/// Builds `K` over all samples, or over the labeled samples only (rows) with
/// columns still spanning every descriptor.
pub fn build_bundled_kernel(
    ds: &DescriptorDataset,
    groups: &GroupWeights,
    labeled_only: bool,
) -> Result<BundledKernel, SolverError> {
    let rows: Vec<usize> = if labeled_only {
        ds.labeled_indices().ok_or(SolverError::MissingMask)?
    } else {
        (0..ds.n_samples()).collect()
    };
    if groups.n_cols() != ds.n_descriptors() || groups.n_rows() != ds.n_samples() {
        return Err(SolverError::Shape("group weights do not match dataset".into()));
    }
    BundledKernel::from_rows(ds.descriptors(), groups, &rows)
}

impl BundledKernel {
    pub fn from_rows(
        x: &DMatrix<f64>,
        groups: &GroupWeights,
        rows: &[usize],
    ) -> Result<Self, SolverError> {
        let means = groups.pool_columns(x, rows);
        let xxt = x * x.transpose();
        let gram = means.transpose() * xxt * &means;
        let gram = (&gram + gram.transpose()) * 0.5;
        let gram_bound = spectral_norm_upper_bound(&gram)?;
        Ok(BundledKernel {
            repr: Repr::Factored {
                means,
                x: x.clone(),
            },
            gram_bound,
        })
    }

    /// Wraps an explicit kernel matrix.
    pub fn from_dense(k: DMatrix<f64>) -> Result<Self, SolverError> {
        let gram = &k * k.transpose();
        let gram_bound = spectral_norm_upper_bound(&gram)?;
        Ok(BundledKernel {
            repr: Repr::Dense(k),
            gram_bound,
        })
    }

    pub fn n_rows(&self) -> usize {
        match &self.repr {
            Repr::Factored { means, .. } => means.ncols(),
            Repr::Dense(k) => k.nrows(),
        }
    }

    pub fn n_cols(&self) -> usize {
        match &self.repr {
            Repr::Factored { x, .. } => x.ncols(),
            Repr::Dense(k) => k.ncols(),
        }
    }

    pub fn gram_bound(&self) -> f64 {
        self.gram_bound
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.repr {
            Repr::Factored { means, x } => means.transpose() * x,
            Repr::Dense(k) => k.clone(),
        }
    }

    /// `K C`.
    pub fn apply(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.repr {
            Repr::Factored { means, x } => means.transpose() * (x * c),
            Repr::Dense(k) => k * c,
        }
    }

    /// `Kᵀ R`.
    pub fn apply_transpose(&self, r: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.repr {
            Repr::Factored { means, x } => x.transpose() * (means * r),
            Repr::Dense(k) => k.transpose() * r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::build_group_weights;

    fn kernel(x: DMatrix<f64>, partition: Vec<usize>, mask: Option<Vec<bool>>) -> BundledKernel {
        let ds = DescriptorDataset::new(x, partition, None, mask.clone()).unwrap();
        let g = build_group_weights(ds.partition()).unwrap();
        build_bundled_kernel(&ds, &g, mask.is_some()).unwrap()
    }

    #[test]
    fn orthonormal_descriptors_give_identity() {
        let k = kernel(DMatrix::identity(2, 2), vec![1, 1], None);
        assert_eq!(k.to_dense(), DMatrix::identity(2, 2));
    }

    #[test]
    fn identical_descriptors_average() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let k = kernel(x, vec![2], None);
        assert_eq!(k.to_dense(), DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
    }

    #[test]
    fn labeled_rows_only() {
        let x = DMatrix::from_fn(3, 6, |r, c| (r + 2 * c) as f64 * 0.1);
        let k = kernel(x, vec![2, 2, 2], Some(vec![true, false, true]));
        assert_eq!((k.n_rows(), k.n_cols()), (2, 6));
    }

    #[test]
    fn missing_mask_is_an_error() {
        let ds = DescriptorDataset::new(DMatrix::identity(2, 2), vec![1, 1], None, None).unwrap();
        let g = build_group_weights(ds.partition()).unwrap();
        assert!(matches!(build_bundled_kernel(&ds, &g, true), Err(SolverError::MissingMask)));
    }

    #[test]
    fn rows_are_mean_inner_products() {
        let x = DMatrix::from_fn(3, 7, |r, c| ((r * 7 + c) as f64).sin());
        let k = kernel(x.clone(), vec![3, 4], None).to_dense();
        for (i, range) in [(0usize, 0..3usize), (1, 3..7)] {
            let len = range.len() as f64;
            for j in 0..7 {
                let expected: f64 = range.clone().map(|a| x.column(a).dot(&x.column(j))).sum::<f64>() / len;
                assert!((k[(i, j)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn factored_products_match_dense() {
        let x = DMatrix::from_fn(4, 9, |r, c| ((r * 9 + c) as f64 * 0.37).cos());
        let k = kernel(x, vec![2, 3, 4], None);
        let dense = k.to_dense();
        let c = DMatrix::from_fn(9, 2, |r, c| (r + c) as f64 * 0.1);
        let r = DMatrix::from_fn(3, 2, |r, c| r as f64 - c as f64);
        assert!((k.apply(&c) - &dense * &c).amax() < 1e-12);
        assert!((k.apply_transpose(&r) - dense.transpose() * &r).amax() < 1e-12);
    }
}
