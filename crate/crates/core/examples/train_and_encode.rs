//! Train on part of the samples, then encode unseen ones with the stored
//! prototype book and predict their responses.
//!
//! cargo run --release --example train_and_encode

use prolfa::aggregate::aggregate_samples;
use prolfa::eval::{generate_synthetic, stratified_split, SyntheticSpec};
use prolfa::{predict_responses, train, Hyperparameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = generate_synthetic(&SyntheticSpec { n_classes: 3, n_points: 300, n_samples: 15, seed: 4, ..Default::default() })?;
    let labels = ds.labels().unwrap();
    let (train_idx, test_idx) = stratified_split(&labels, 0.6, 0)?;

    let hyper = Hyperparameters { d_bar: 3, tol_outer: 1e-4, ..Default::default() };
    let trained = train(&ds.subset(&train_idx)?, &hyper)?;
    for rec in &trained.state.objective_trace {
        println!("k={:<3} objective={:.6e} |Z-C|={:.2e} admm={}", rec.k, rec.objective, rec.primal_residual, rec.admm_iterations);
    }

    let test = aggregate_samples(&ds, &test_idx, &trained.model)?;
    let y_hat = predict_responses(&test, &trained.model)?;
    for (row, &i) in y_hat.row_iter().zip(&test_idx) {
        let guess = row.transpose().argmax().0;
        println!("sample {i}: class {} predicted {guess}", labels[i]);
    }
    Ok(())
}
