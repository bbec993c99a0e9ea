//! Two Gaussian classes, ten samples, two prototypes: every sample becomes a
//! 2-D point and the classes separate.
//!
//! cargo run --release --example synthetic_separability

use prolfa::eval::{generate_synthetic, SyntheticSpec};
use prolfa::{aggregate_training, train, Hyperparameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = generate_synthetic(&SyntheticSpec::default())?;
    let labels = ds.labels().expect("synthetic data is labeled");
    let trained = train(&ds, &Hyperparameters::default())?;
    let reps = aggregate_training(&ds, &trained)?;

    println!("sample class        x          y");
    for (r, l) in reps.iter().zip(&labels) {
        println!("{:>6} {:>5} {:>10.4} {:>10.4}", r.sample_id, l, r.vector[0], r.vector[1]);
    }
    println!("final objective {:.6}", trained.model.final_objective);
    Ok(())
}
