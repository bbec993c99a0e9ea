//! Training time as the descriptor count doubles, with a straight-line fit.
//!
//! cargo run --release --example timing

use prolfa::eval::{run_timing_benchmark, SyntheticSpec};
use prolfa::Hyperparameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec { dim: 16, ..Default::default() };
    let hyper = Hyperparameters { d_bar: 16, ..Default::default() };
    let table = run_timing_benchmark(&[500, 1000, 2000, 4000], &spec, &hyper, 3)?;
    for row in &table.rows {
        println!("N={:<5} {:.4}s outer={} admm={}", row.n, row.seconds, row.outer_iterations, row.admm_iterations);
    }
    println!("seconds ≈ {:.3e}·N + {:.3e}  (R² = {:.4})", table.slope, table.intercept, table.r_squared);
    Ok(())
}
