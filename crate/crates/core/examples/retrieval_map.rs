//! Leave-one-out retrieval: every sample queries all others, same class is
//! relevant, and the average precisions are averaged into mAP.
//!
//! cargo run --release --example retrieval_map

use nalgebra::DVector;
use prolfa::eval::{generate_synthetic, leave_one_out_map, Metric, SyntheticSpec};
use prolfa::{aggregate_training, train, Hyperparameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec { n_classes: 4, n_points: 480, n_samples: 24, dim: 3, class_separation: 3.0, seed: 5, ..Default::default() };
    let ds = generate_synthetic(&spec)?;
    let labels = ds.labels().unwrap();
    let trained = train(&ds, &Hyperparameters { d_bar: 4, ..Default::default() })?;
    let reps: Vec<DVector<f64>> = aggregate_training(&ds, &trained)?.into_iter().map(|r| r.normalize().vector).collect();

    let queries: Vec<usize> = (0..reps.len()).collect();
    let result = leave_one_out_map(&reps, &labels, &queries, Metric::Euclidean)?;
    println!("mAP over {} queries: {:.4}", result.average_precisions.len(), result.map);
    Ok(())
}
