use std::ops::Range;

use nalgebra::DMatrix;

use super::DataError;

/// Hard group weights `𝒢`: row `i` puts `1/N_i` on each descriptor of
/// sample `i` and zero elsewhere. Stored as the column range of each row.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupWeights {
    offsets: Vec<usize>,
}

/// Builds `𝒢` from the sample sizes of consecutive descriptor blocks.
pub fn build_group_weights(partition: &[usize]) -> Result<GroupWeights, DataError> {
    let mut offsets = Vec::with_capacity(partition.len() + 1);
    offsets.push(0usize);
    for (index, &size) in partition.iter().enumerate() {
        if size == 0 {
            return Err(DataError::EmptySample { index });
        }
        offsets.push(offsets[index] + size);
    }
    Ok(GroupWeights { offsets })
}

impl GroupWeights {
    /// Number of rows `m`.
    pub fn n_rows(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Row length `N`.
    pub fn n_cols(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Support of row `i`.
    pub fn support(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let r = self.support(i);
        if r.contains(&j) {
            1.0 / r.len() as f64
        } else {
            0.0
        }
    }

    pub fn row_dense(&self, i: usize) -> Vec<f64> {
        (0..self.n_cols()).map(|j| self.weight(i, j)).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n_rows(), self.n_cols(), |i, j| self.weight(i, j))
    }

    /// `X 𝒢ᵀ` for the selected rows: column `k` is the mean of the descriptors
    /// of sample `rows[k]`.
    pub fn pool_columns(&self, x: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(x.nrows(), rows.len());
        for (k, &i) in rows.iter().enumerate() {
            let r = self.support(i);
            let inv = 1.0 / r.len() as f64;
            let mut col = out.column_mut(k);
            for j in r {
                col.axpy(inv, &x.column(j), 1.0);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_two_partition() {
        let g = build_group_weights(&[3, 2]).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(g.row_dense(0), vec![third, third, third, 0.0, 0.0]);
        assert_eq!(g.row_dense(1), vec![0.0, 0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn single_descriptor() {
        let g = build_group_weights(&[1]).unwrap();
        assert_eq!(g.row_dense(0), vec![1.0]);
    }

    #[test]
    fn uniform_pairs() {
        let g = build_group_weights(&[2, 2, 2]).unwrap().to_dense();
        let expected = DMatrix::from_row_slice(
            3,
            6,
            &[
                0.5, 0.5, 0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.5, 0.5, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, 0.5, 0.5,
            ],
        );
        assert_eq!(g, expected);
    }

    #[test]
    fn empty_sample_is_rejected() {
        assert!(matches!(
            build_group_weights(&[2, 0]),
            Err(DataError::EmptySample { index: 1 })
        ));
    }

    proptest! {
        #[test]
        fn rows_are_stochastic_with_disjoint_support(sizes in prop::collection::vec(1usize..9, 1..8)) {
            let g = build_group_weights(&sizes).unwrap().to_dense();
            for i in 0..g.nrows() {
                let s: f64 = g.row(i).sum();
                prop_assert!((s - 1.0).abs() <= 1e-12);
                let nz: Vec<f64> = g.row(i).iter().copied().filter(|&v| v != 0.0).collect();
                prop_assert_eq!(nz.len(), sizes[i]);
                prop_assert!(nz.iter().all(|&v| v == 1.0 / sizes[i] as f64));
                for k in (i + 1)..g.nrows() {
                    for j in 0..g.ncols() {
                        prop_assert_eq!(g[(i, j)] * g[(k, j)], 0.0);
                    }
                }
            }
        }
    }
}
