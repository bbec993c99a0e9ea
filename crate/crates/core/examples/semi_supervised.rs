//! Only two samples carry labels; the other descriptors still shape the
//! prototypes. The unlabeled samples are encoded afterwards.
//!
//! cargo run --release --example semi_supervised

use prolfa::eval::{generate_synthetic, SyntheticSpec};
use prolfa::{aggregate_unlabeled, predict_responses, train_semi, Hyperparameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = generate_synthetic(&SyntheticSpec { seed: 2, ..Default::default() })?;
    let truth = ds.labels().unwrap();
    let mask: Vec<bool> = (0..ds.n_samples()).map(|i| i == 0 || i == 1).collect();
    let ds = ds.with_label_mask(Some(mask))?;

    let trained = train_semi(&ds, &Hyperparameters::default())?;
    let reps = aggregate_unlabeled(&ds, &trained.model)?;
    let y_hat = predict_responses(&reps, &trained.model)?;

    let mut correct = 0;
    for (r, row) in reps.iter().zip(y_hat.row_iter()) {
        let i: usize = r.sample_id.parse()?;
        let guess = row.transpose().argmax().0;
        correct += usize::from(guess == truth[i]);
        println!("sample {i}: class {} predicted {guess}", truth[i]);
    }
    println!("{correct}/{} unlabeled samples recovered", reps.len());
    Ok(())
}
