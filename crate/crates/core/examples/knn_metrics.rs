//! 1-NN accuracy of the aggregated vectors under each distance.
//!
//! cargo run --release --example knn_metrics

use prolfa::eval::{evaluate_split, generate_synthetic, Metric, Protocol, SyntheticSpec};
use prolfa::Hyperparameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec { n_classes: 3, n_points: 600, n_samples: 30, dim: 4, class_separation: 2.5, seed: 11, ..Default::default() };
    let ds = generate_synthetic(&spec)?;
    let hyper = Hyperparameters { d_bar: 4, ..Default::default() };
    for metric in [Metric::Euclidean, Metric::Cosine, Metric::Mahalanobis, Metric::Minkowski(3.0)] {
        let protocol = Protocol { metric, ..Protocol::classification(hyper) };
        let report = evaluate_split(&ds, 0.5, &protocol, 4, 0)?;
        println!("{:<12} {:.3} ± {:.3}", metric.name(), report.mean, report.std);
    }
    Ok(())
}
