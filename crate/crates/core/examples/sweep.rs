//! Accuracy and selection exclusivity across prototype counts and lambda1.
//!
//! cargo run --release --example sweep

use prolfa::eval::{generate_synthetic, run_sweep, Protocol, SweepGrid, SyntheticSpec};
use prolfa::Hyperparameters;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = generate_synthetic(&SyntheticSpec { class_separation: 3.0, ..Default::default() })?;
    let base = Hyperparameters::default();
    let protocol = Protocol::classification(base);
    for grid in ["d_bar=2,4,8", "lambda1=0.01,0.1,1,10"] {
        let grid: SweepGrid = grid.parse()?;
        println!("{:<8} {:>8} {:>8} {:>12}", grid.name(), "mean", "std", "exclusivity");
        for p in run_sweep(&ds, &grid, &base, &protocol, 0.8, 3, 0)? {
            println!("{:<8} {:>8.3} {:>8.3} {:>12.4e}", p.value, p.report.mean, p.report.std, p.exclusivity);
        }
    }
    Ok(())
}
