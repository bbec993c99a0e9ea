use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::EvalError;
use crate::data::{one_hot, DescriptorDataset};

/// Gaussian class clusters grouped into class-pure samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n_points: usize,
    pub n_samples: usize,
    pub points_per_sample: usize,
    pub n_classes: usize,
    pub dim: usize,
    /// Distance between neighbouring class means.
    pub class_separation: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_points: 200,
            n_samples: 10,
            points_per_sample: 20,
            n_classes: 2,
            dim: 2,
            class_separation: 6.0,
            noise_sigma: 1.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    /// Copy with `n_points` descriptors in samples of the same size as `self`.
    pub fn with_points(self, n_points: usize) -> Self {
        SyntheticSpec {
            n_points,
            n_samples: n_points / self.points_per_sample,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.n_samples.checked_mul(self.points_per_sample) != Some(self.n_points) {
            return Err(EvalError::Config(format!(
                "n_samples ({}) x points_per_sample ({}) must equal n_points ({})",
                self.n_samples, self.points_per_sample, self.n_points
            )));
        }
        if self.n_points == 0 || self.dim == 0 || self.n_classes == 0 {
            return Err(EvalError::Config("n_points, dim and n_classes must be positive".into()));
        }
        if self.n_classes > self.n_samples {
            return Err(EvalError::Config(format!(
                "{} classes cannot be spread over {} samples",
                self.n_classes, self.n_samples
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite())
            || !(self.class_separation >= 0.0 && self.class_separation.is_finite())
        {
            return Err(EvalError::Config("noise_sigma and class_separation must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Class centres: evenly spaced on a circle in the first two coordinates
    /// with neighbouring centres `class_separation` apart (on a line when
    /// `dim = 1`).
    pub fn class_means(&self) -> Vec<DVector<f64>> {
        let k = self.n_classes;
        (0..k)
            .map(|c| {
                let mut mean = DVector::zeros(self.dim);
                if k == 1 {
                    return mean;
                }
                if self.dim == 1 {
                    mean[0] = (c as f64 - (k - 1) as f64 / 2.0) * self.class_separation;
                } else {
                    let radius = self.class_separation / (2.0 * (std::f64::consts::PI / k as f64).sin());
                    let angle = 2.0 * std::f64::consts::PI * c as f64 / k as f64;
                    mean[0] = radius * angle.cos();
                    mean[1] = radius * angle.sin();
                }
                mean
            })
            .collect()
    }
}

/// Draws the dataset. Sample `i` belongs to class `i mod n_classes`; its
/// descriptors are i.i.d. `N(mean_class, σ²I)`. Responses are one-hot.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<DescriptorDataset, EvalError> {
    spec.validate()?;
    let means = spec.class_means();
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| EvalError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut x = DMatrix::zeros(spec.dim, spec.n_points);
    let labels: Vec<usize> = (0..spec.n_samples).map(|i| i % spec.n_classes).collect();
    for (i, &class) in labels.iter().enumerate() {
        for p in 0..spec.points_per_sample {
            let col = i * spec.points_per_sample + p;
            for r in 0..spec.dim {
                x[(r, col)] = means[class][r] + noise.sample(&mut rng);
            }
        }
    }
    let y = one_hot(&labels, spec.n_classes);
    Ok(DescriptorDataset::new(x, vec![spec.points_per_sample; spec.n_samples], Some(y), None)?)
}
