//! Bag-of-words histograms over a k-means codebook, scored next to the
//! prototype encoder on the same splits.
//!
//! cargo run --release --example kmeans_baseline

use prolfa::eval::{evaluate_split, generate_synthetic, kmeans_bow_baseline, Encoder, Protocol, SyntheticSpec};
use prolfa::Hyperparameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec { class_separation: 2.0, seed: 9, n_points: 400, n_samples: 20, ..Default::default() };
    let ds = generate_synthetic(&spec)?;

    let hist = kmeans_bow_baseline(&ds, 4, 0)?;
    println!("sample 0 histogram: {:?}", hist[0].vector.as_slice());

    let prolfa = Protocol::classification(Hyperparameters::default());
    let bow = prolfa.with_encoder(Encoder::KMeansBow { codebook_size: 4 });
    for (name, p) in [("prototypes", prolfa), ("k-means bow", bow)] {
        let r = evaluate_split(&ds, 0.5, &p, 6, 0)?;
        println!("{name:<12} accuracy {:.3} ± {:.3}", r.mean, r.std);
    }
    Ok(())
}
