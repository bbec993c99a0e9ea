use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{accuracy, kmeans_bow_baseline, knn_classify, leave_one_out_map, EvalError, Metric};
use crate::aggregate::{aggregate_samples, AggregatedRepresentation};
use crate::data::{DescriptorDataset, Hyperparameters};
use crate::solver::{train, train_semi};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// k-NN accuracy on held-out samples.
    Classification,
    /// Held-out samples query every other sample; mAP with same-class
    /// relevance.
    Retrieval,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Classification => "classification",
            Task::Retrieval => "retrieval",
        }
    }

    pub fn metric_name(&self) -> &'static str {
        match self {
            Task::Classification => "accuracy",
            Task::Retrieval => "map",
        }
    }
}

/// How samples become vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Encoder {
    /// Trained prototype book; `semi` trains on every descriptor with the
    /// training split as the labeled set.
    Prolfa { hyper: Hyperparameters, semi: bool },
    /// k-means bag-of-words histograms over every descriptor.
    KMeansBow { codebook_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub task: Task,
    pub encoder: Encoder,
    pub k: usize,
    pub metric: Metric,
    /// ℓ2-normalize representations before evaluation.
    pub normalize: bool,
}

impl Protocol {
    pub fn classification(hyper: Hyperparameters) -> Self {
        Protocol {
            task: Task::Classification,
            encoder: Encoder::Prolfa { hyper, semi: false },
            k: 1,
            metric: Metric::Euclidean,
            normalize: false,
        }
    }

    pub fn with_encoder(self, encoder: Encoder) -> Self {
        Protocol { encoder, ..self }
    }
}

/// Mean and spread of one metric over seeded repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: Task,
    pub metric: String,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Encoder fitting time per repetition, seconds.
    pub train_seconds: Vec<f64>,
    /// Whole repetition time, seconds.
    pub total_seconds: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (0 for a single repetition).
    pub std: f64,
}

impl EvalReport {
    pub fn new(task: Task, values: Vec<f64>, seeds: Vec<u64>, train_seconds: Vec<f64>, total_seconds: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&values);
        EvalReport {
            task,
            metric: task.metric_name().to_string(),
            values,
            seeds,
            train_seconds,
            total_seconds,
            mean,
            std,
        }
    }

    pub fn repetitions(&self) -> usize {
        self.values.len()
    }

    /// `key=value` lines:
    ///
    /// ```text
    /// task=classification
    /// metric=accuracy
    /// repetitions=6
    /// mean=0.95
    /// std=0.05
    /// values=1,0.9,...
    /// seeds=0,1,...
    /// train_seconds=...
    /// total_seconds=...
    /// ```
    pub fn to_key_value(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "task={}", self.task.name());
        let _ = writeln!(s, "metric={}", self.metric);
        let _ = writeln!(s, "repetitions={}", self.repetitions());
        let _ = writeln!(s, "mean={}", self.mean);
        let _ = writeln!(s, "std={}", self.std);
        let _ = writeln!(s, "values={}", join(&self.values));
        let seeds: Vec<String> = self.seeds.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "seeds={}", seeds.join(","));
        let _ = writeln!(s, "train_seconds={}", join(&self.train_seconds));
        let _ = writeln!(s, "total_seconds={}", join(&self.total_seconds));
        s
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Seed of repetition `r`.
pub fn repetition_seed(seed: u64, r: usize) -> u64 {
    seed.wrapping_add(r as u64)
}

/// Per class, a shuffled `round(fraction · n_c)` samples (at least one, and
/// at least one left out) go to training. Returns sorted (train, test).
pub fn stratified_split(
    labels: &[usize],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), EvalError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(EvalError::Config(format!("train fraction must lie in (0, 1), got {train_fraction}")));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in 0..n_classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < 2 {
            return Err(EvalError::Invalid(format!("class {c} has fewer than 2 samples")));
        }
        members.shuffle(&mut rng);
        let n_train = ((train_fraction * members.len() as f64).round() as usize).clamp(1, members.len() - 1);
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

fn vectors(reps: Vec<AggregatedRepresentation>, normalize: bool) -> Vec<DVector<f64>> {
    reps.into_iter()
        .map(|r| if normalize { r.normalize().vector } else { r.vector })
        .collect()
}

/// Encodes every sample of `ds` for one repetition. Returns the vectors and
/// the fitting time.
fn encode_all(
    ds: &DescriptorDataset,
    train_idx: &[usize],
    encoder: Encoder,
    seed: u64,
) -> Result<(Vec<AggregatedRepresentation>, f64), EvalError> {
    let start = Instant::now();
    let all: Vec<usize> = (0..ds.n_samples()).collect();
    match encoder {
        Encoder::Prolfa { hyper, semi } => {
            let hyper = Hyperparameters { seed: seed as u32, ..hyper };
            let model = if semi {
                let mut mask = vec![false; ds.n_samples()];
                for &i in train_idx {
                    mask[i] = true;
                }
                train_semi(&ds.with_label_mask(Some(mask))?, &hyper)?.model
            } else {
                train(&ds.subset(train_idx)?, &hyper)?.model
            };
            let fit = start.elapsed().as_secs_f64();
            Ok((aggregate_samples(ds, &all, &model)?, fit))
        }
        Encoder::KMeansBow { codebook_size } => {
            let reps = kmeans_bow_baseline(ds, codebook_size, seed)?;
            Ok((reps, start.elapsed().as_secs_f64()))
        }
    }
}

/// One repetition on a fixed split. Returns (metric value, fit seconds).
pub fn evaluate_once(
    ds: &DescriptorDataset,
    train_idx: &[usize],
    test_idx: &[usize],
    protocol: &Protocol,
    seed: u64,
) -> Result<(f64, f64), EvalError> {
    let labels = ds.labels().ok_or_else(|| EvalError::Invalid("dataset has no responses".into()))?;
    let (reps, fit) = encode_all(ds, train_idx, protocol.encoder, seed)?;
    let reps = vectors(reps, protocol.normalize);
    let value = match protocol.task {
        Task::Classification => {
            let train_reps: Vec<DVector<f64>> = train_idx.iter().map(|&i| reps[i].clone()).collect();
            let train_labels: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
            let test_reps: Vec<DVector<f64>> = test_idx.iter().map(|&i| reps[i].clone()).collect();
            let truth: Vec<usize> = test_idx.iter().map(|&i| labels[i]).collect();
            let pred = knn_classify(&train_reps, &train_labels, &test_reps, protocol.k, protocol.metric)?;
            accuracy(&pred, &truth)
        }
        Task::Retrieval => leave_one_out_map(&reps, &labels, test_idx, protocol.metric)?.map,
    };
    Ok((value, fit))
}

/// Stratified split, train, encode and score, `repetitions` times with
/// seeds `seed, seed + 1, ...`. Repetitions run in parallel; the report
/// keeps repetition order.
pub fn evaluate_split(
    ds: &DescriptorDataset,
    train_fraction: f64,
    protocol: &Protocol,
    repetitions: usize,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    if repetitions == 0 {
        return Err(EvalError::Config("repetitions must be >= 1".into()));
    }
    let labels = ds.labels().ok_or_else(|| EvalError::Invalid("dataset has no responses".into()))?;
    let runs: Vec<(u64, f64, f64, f64)> = (0..repetitions)
        .into_par_iter()
        .map(|r| {
            let start = Instant::now();
            let s = repetition_seed(seed, r);
            let (train_idx, test_idx) = stratified_split(&labels, train_fraction, s)?;
            let (value, fit) = evaluate_once(ds, &train_idx, &test_idx, protocol, s)?;
            Ok((s, value, fit, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(EvalReport::new(
        protocol.task,
        runs.iter().map(|r| r.1).collect(),
        runs.iter().map(|r| r.0).collect(),
        runs.iter().map(|r| r.2).collect(),
        runs.iter().map(|r| r.3).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_keeps_class_fractions() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let (train, test) = stratified_split(&labels, 0.8, 4).unwrap();
        assert_eq!(train.len() + test.len(), 30);
        for c in 0..3 {
            assert_eq!(train.iter().filter(|&&i| labels[i] == c).count(), 8);
        }
    }

    #[test]
    fn split_errors() {
        assert!(stratified_split(&[0, 0, 1], 0.5, 0).is_err());
        assert!(stratified_split(&[0, 0, 1, 1], 1.0, 0).is_err());
        assert!(stratified_split(&[0, 0, 1, 1], 0.0, 0).is_err());
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn report_text_lists_every_key() {
        let r = EvalReport::new(Task::Retrieval, vec![0.5, 1.0], vec![3, 4], vec![0.1, 0.2], vec![0.2, 0.3]);
        let text = r.to_key_value();
        for key in ["task=retrieval", "metric=map", "repetitions=2", "mean=0.75", "values=0.5,1", "seeds=3,4"] {
            assert!(text.contains(key), "{key} missing from {text}");
        }
    }
}
