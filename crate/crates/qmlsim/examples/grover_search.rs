//! Grover amplitude amplification: the success probability oscillates as
//! sin²((2k+1)·arcsin(1/√N)) and peaks near k = ⌊π/4·√N⌋.
//!
//! ```bash
//! cargo run --release --example grover_search
//! ```

use qmlsim::algos::{grover_search, grover_success_probability, OracleSpec};

fn main() -> qmlsim::Result<()> {
    let n = 64;
    let marked = 42;
    let oracle = OracleSpec::new(n, marked)?;
    println!("N = {n}, marked index {marked}, optimal k = {}", oracle.default_iterations());
    println!("\n k   simulated P(success)  closed form   bar");
    for k in 0..=12 {
        let outcome = grover_search(&oracle, Some(k), 1)?;
        let closed = grover_success_probability(n, 1, k);
        let bar = "#".repeat((outcome.success_probability * 40.0).round() as usize);
        println!(
            "{k:2}   {:.6}              {closed:.6}      {bar}",
            outcome.success_probability
        );
    }

    let best = grover_search(&oracle, None, 1)?;
    println!(
        "\nat the default iteration count ({}): sampled index {} with P(success) = {:.4}",
        best.iterations, best.index, best.success_probability
    );
    Ok(())
}
