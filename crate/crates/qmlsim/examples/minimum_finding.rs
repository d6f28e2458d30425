//! Grover-driven minimum finding over a penalized loss table: the threshold
//! descent repeatedly searches the set of candidates strictly better than
//! the current best.
//!
//! ```bash
//! cargo run --release --example minimum_finding
//! ```

use qmlsim::algos::{minimize_map, MapObjective};

fn main() -> qmlsim::Result<()> {
    // candidate models scored by empirical loss plus a complexity penalty
    let empirical = [3.1, 0.9, 2.6, 0.8, 1.5, 4.0, 0.95, 2.2];
    let penalty = [0.0, 4.0, 1.0, 5.0, 0.5, 0.0, 0.2, 1.0];
    let lambda = 0.05;

    println!("candidate   empirical  penalty   total (λ = {lambda})");
    for (i, (e, p)) in empirical.iter().zip(&penalty).enumerate() {
        println!("{i:9}   {e:8.3}  {p:7.2}   {:.4}", e + lambda * p);
    }

    let objective = MapObjective::from_parts(&empirical, &penalty, lambda)?;
    let budget = 30 * 3; // 30·log₂|Y|
    for seed in 0..5 {
        let (index, value) = minimize_map(&objective, seed, budget)?;
        println!("seed {seed}: argmin = candidate {index}, loss {value:.4}");
    }

    let scan = objective
        .losses()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    println!("linear-scan minimum for reference: {scan:.4}");
    Ok(())
}
