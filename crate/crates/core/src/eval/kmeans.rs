use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::aggregate::AggregatedRepresentation;
use crate::data::DescriptorDataset;

pub const KMEANS_MAX_ITER: usize = 100;

/// Lloyd's k-means codebook (`d × k`).
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub centers: DMatrix<f64>,
    pub iterations: usize,
    /// Empty clusters re-seeded along the way.
    pub reseeded: usize,
}

fn sq_dist(x: &DMatrix<f64>, j: usize, c: &DMatrix<f64>, k: usize) -> f64 {
    x.column(j)
        .iter()
        .zip(c.column(k).iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

impl Codebook {
    /// Nearest center of descriptor `j` (ties to the lowest index) and its
    /// squared distance.
    fn nearest(&self, x: &DMatrix<f64>, j: usize) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for k in 0..self.centers.ncols() {
            let d = sq_dist(x, j, &self.centers, k);
            if d < best.1 {
                best = (k, d);
            }
        }
        best
    }

    pub fn assign(&self, x: &DMatrix<f64>) -> Vec<usize> {
        (0..x.ncols()).map(|j| self.nearest(x, j).0).collect()
    }
}

/// k-means++ seeding from `seed`, then at most [`KMEANS_MAX_ITER`] Lloyd
/// iterations. An empty cluster takes the descriptor farthest from its own
/// center (lowest index on ties).
pub fn kmeans(x: &DMatrix<f64>, k: usize, seed: u64) -> Result<Codebook, EvalError> {
    let n = x.ncols();
    if k == 0 || k > n {
        return Err(EvalError::Config(format!("codebook size must lie in 1..={n}, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = (0..n).map(|j| sq_dist(x, j, x, chosen[0])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (j, &w) in d2.iter().enumerate() {
                if w > 0.0 && target < w {
                    pick = j;
                    break;
                }
                target -= w;
            }
            // Rounding can run past the end; fall back to the last positive weight.
            if d2[pick] == 0.0 {
                pick = d2.iter().rposition(|&w| w > 0.0).unwrap_or(pick);
            }
            pick
        } else {
            (0..n).find(|j| !chosen.contains(j)).unwrap_or(0)
        };
        chosen.push(next);
        for (j, slot) in d2.iter_mut().enumerate() {
            *slot = slot.min(sq_dist(x, j, x, next));
        }
    }
    let mut book = Codebook {
        centers: DMatrix::from_fn(x.nrows(), k, |r, c| x[(r, chosen[c])]),
        iterations: 0,
        reseeded: 0,
    };

    let mut assignment: Vec<usize> = vec![usize::MAX; n];
    for it in 1..=KMEANS_MAX_ITER {
        book.iterations = it;
        let nearest: Vec<(usize, f64)> = (0..n).map(|j| book.nearest(x, j)).collect();
        let changed = nearest.iter().zip(&assignment).any(|(a, b)| a.0 != *b);
        assignment = nearest.iter().map(|a| a.0).collect();
        if !changed {
            break;
        }
        let mut sums = DMatrix::zeros(x.nrows(), k);
        let mut counts = vec![0usize; k];
        for (j, &a) in assignment.iter().enumerate() {
            counts[a] += 1;
            let mut col = sums.column_mut(a);
            col += x.column(j);
        }
        let mut residual: Vec<f64> = nearest.iter().map(|a| a.1).collect();
        for c in 0..k {
            if counts[c] > 0 {
                let col = sums.column(c) / counts[c] as f64;
                book.centers.set_column(c, &col);
            } else {
                let far = (0..n)
                    .max_by(|&a, &b| residual[a].total_cmp(&residual[b]).then(b.cmp(&a)))
                    .expect("n >= 1");
                book.centers.set_column(c, &x.column(far));
                residual[far] = 0.0;
                book.reseeded += 1;
            }
        }
    }
    Ok(book)
}

/// Per-sample ℓ1-normalized histogram of hard codeword assignments.
pub fn bow_histograms(ds: &DescriptorDataset, book: &Codebook) -> Vec<AggregatedRepresentation> {
    let assignment = book.assign(ds.descriptors());
    let k = book.centers.ncols();
    (0..ds.n_samples())
        .map(|i| {
            let range = ds.sample_range(i);
            let mut h = DVector::zeros(k);
            for j in range.clone() {
                h[assignment[j]] += 1.0;
            }
            h /= range.len() as f64;
            AggregatedRepresentation::new(h, i.to_string())
        })
        .collect()
}

/// Bag-of-words baseline: k-means on every descriptor, then histograms.
pub fn kmeans_bow_baseline(
    ds: &DescriptorDataset,
    codebook_size: usize,
    seed: u64,
) -> Result<Vec<AggregatedRepresentation>, EvalError> {
    let book = kmeans(ds.descriptors(), codebook_size, seed)?;
    Ok(bow_histograms(ds, &book))
}
