use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::EvalError;

/// Distance used by k-NN and retrieval ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Euclidean,
    /// `1 − cos θ`; a zero vector is at distance 1 from everything.
    Cosine,
    /// Uses the reference-set covariance plus a ridge of `1e-6 · trace / dim`.
    Mahalanobis,
    Minkowski(f64),
}

impl Metric {
    pub const DEFAULT_MINKOWSKI_P: f64 = 3.0;

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
            Metric::Mahalanobis => "mahalanobis",
            Metric::Minkowski(_) => "minkowski",
        }
    }

    /// Parses `euclidean`, `cosine`, `mahalanobis` or `minkowski`, the
    /// latter taking `p` (default 3).
    pub fn parse(name: &str, p: Option<f64>) -> Result<Self, EvalError> {
        match name.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" => Ok(Metric::Cosine),
            "mahalanobis" => Ok(Metric::Mahalanobis),
            "minkowski" => {
                let p = p.unwrap_or(Self::DEFAULT_MINKOWSKI_P);
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(EvalError::Config(format!("minkowski p must be finite and >= 1, got {p}")));
                }
                Ok(Metric::Minkowski(p))
            }
            other => Err(EvalError::Config(format!("unknown metric '{other}'"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Minkowski(p) => write!(f, "minkowski(p={p})"),
            m => f.write_str(m.name()),
        }
    }
}

impl FromStr for Metric {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::parse(s, None)
    }
}

/// A metric bound to a reference set (needed for Mahalanobis).
#[derive(Debug, Clone)]
pub struct DistanceFn {
    metric: Metric,
    /// Inverse covariance for Mahalanobis.
    precision: Option<DMatrix<f64>>,
}

impl DistanceFn {
    pub fn fit(metric: Metric, reference: &[DVector<f64>]) -> Result<Self, EvalError> {
        let precision = match metric {
            Metric::Mahalanobis => Some(precision_matrix(reference)?),
            _ => None,
        };
        Ok(DistanceFn { metric, precision })
    }

    pub fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self.metric {
            Metric::Euclidean => (a - b).norm(),
            Metric::Cosine => {
                let na = a.norm();
                let nb = b.norm();
                if na == 0.0 || nb == 0.0 {
                    1.0
                } else {
                    1.0 - a.dot(b) / (na * nb)
                }
            }
            Metric::Mahalanobis => {
                let d = a - b;
                let p = self.precision.as_ref().expect("fitted precision");
                d.dot(&(p * &d)).max(0.0).sqrt()
            }
            Metric::Minkowski(p) => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

fn precision_matrix(reference: &[DVector<f64>]) -> Result<DMatrix<f64>, EvalError> {
    let n = reference.len();
    if n == 0 {
        return Err(EvalError::Invalid("mahalanobis needs a non-empty reference set".into()));
    }
    let dim = reference[0].len();
    let mut mean = DVector::zeros(dim);
    for v in reference {
        mean += v;
    }
    mean /= n as f64;
    let mut cov = DMatrix::zeros(dim, dim);
    for v in reference {
        let c = v - &mean;
        cov += &c * c.transpose();
    }
    cov /= (n.max(2) - 1) as f64;
    let trace = cov.trace();
    // A constant reference set has zero covariance; any positive ridge then
    // gives a (scaled) Euclidean distance.
    let ridge = if trace > 0.0 { 1e-6 * trace / dim as f64 } else { 1.0 };
    for i in 0..dim {
        cov[(i, i)] += ridge;
    }
    cov.cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| EvalError::Invalid("covariance is not positive definite".into()))
}

/// Majority vote among the `k` nearest training points (distance, then
/// index order). Vote ties go to the smallest summed distance, then to the
/// lowest class index.
pub fn knn_classify(
    train: &[DVector<f64>],
    train_labels: &[usize],
    test: &[DVector<f64>],
    k: usize,
    metric: Metric,
) -> Result<Vec<usize>, EvalError> {
    if train.is_empty() {
        return Err(EvalError::Invalid("empty training set".into()));
    }
    if train.len() != train_labels.len() {
        return Err(EvalError::Invalid(format!(
            "{} training vectors but {} labels",
            train.len(),
            train_labels.len()
        )));
    }
    if k == 0 || k > train.len() {
        return Err(EvalError::Config(format!(
            "k must lie in 1..={}, got {k}",
            train.len()
        )));
    }
    let dist = DistanceFn::fit(metric, train)?;
    let n_classes = train_labels.iter().max().map_or(0, |m| m + 1);
    Ok(test
        .iter()
        .map(|q| {
            let mut ranked: Vec<(f64, usize)> = train
                .iter()
                .enumerate()
                .map(|(i, t)| (dist.distance(q, t), i))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut votes = vec![0usize; n_classes];
            let mut summed = vec![0.0f64; n_classes];
            for &(d, i) in &ranked[..k] {
                votes[train_labels[i]] += 1;
                summed[train_labels[i]] += d;
            }
            (0..n_classes)
                .filter(|&c| votes[c] > 0)
                .min_by(|&a, &b| {
                    votes[b]
                        .cmp(&votes[a])
                        .then(summed[a].total_cmp(&summed[b]))
                        .then(a.cmp(&b))
                })
                .expect("k >= 1 casts at least one vote")
        })
        .collect())
}

/// Fraction of positions where `predicted` equals `truth`.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if predicted.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    hits as f64 / predicted.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn nearest_of_two() {
        let train = [v(&[0.0, 0.0]), v(&[1.0, 1.0])];
        let pred = knn_classify(&train, &[0, 1], &[v(&[0.1, 0.0])], 1, Metric::Euclidean).unwrap();
        assert_eq!(pred, vec![0]);
    }

    #[test]
    fn full_k_gives_majority() {
        let train = [v(&[0.0]), v(&[1.0]), v(&[2.0]), v(&[10.0])];
        let labels = [1, 0, 1, 1];
        let pred = knn_classify(&train, &labels, &[v(&[1.0]), v(&[-5.0])], 4, Metric::Euclidean).unwrap();
        assert_eq!(pred, vec![1, 1]);
    }

    #[test]
    fn vote_tie_goes_to_closer_class_then_lower_index() {
        let train = [v(&[0.0]), v(&[3.0])];
        assert_eq!(knn_classify(&train, &[1, 0], &[v(&[1.0])], 2, Metric::Euclidean).unwrap(), vec![1]);
        assert_eq!(knn_classify(&train, &[1, 0], &[v(&[1.5])], 2, Metric::Euclidean).unwrap(), vec![0]);
    }

    #[test]
    fn rejects_bad_k_and_empty_train() {
        let train = [v(&[0.0])];
        assert!(knn_classify(&train, &[0], &[v(&[0.0])], 0, Metric::Euclidean).is_err());
        assert!(knn_classify(&train, &[0], &[v(&[0.0])], 2, Metric::Euclidean).is_err());
        assert!(knn_classify(&[], &[], &[v(&[0.0])], 1, Metric::Euclidean).is_err());
    }

    #[test]
    fn metric_values() {
        let a = v(&[1.0, 0.0]);
        let b = v(&[0.0, 2.0]);
        let d = |m| DistanceFn::fit(m, &[a.clone(), b.clone()]).unwrap().distance(&a, &b);
        assert!((d(Metric::Euclidean) - 5f64.sqrt()).abs() < 1e-12);
        assert!((d(Metric::Cosine) - 1.0).abs() < 1e-12);
        assert!((d(Metric::Minkowski(1.0)) - 3.0).abs() < 1e-12);
        assert!((d(Metric::Minkowski(3.0)) - 9f64.cbrt()).abs() < 1e-12);
        assert!(d(Metric::Mahalanobis).is_finite());
    }

    #[test]
    fn metric_parsing() {
        assert_eq!(Metric::parse("minkowski", Some(3.0)).unwrap(), Metric::Minkowski(3.0));
        assert_eq!(Metric::parse("minkowski", None).unwrap(), Metric::Minkowski(3.0));
        assert_eq!("Cosine".parse::<Metric>().unwrap(), Metric::Cosine);
        assert!(Metric::parse("minkowski", Some(0.5)).is_err());
        assert!(Metric::parse("hamming", None).is_err());
    }
}
