//! Quantum kernels in action: a Gram matrix, kernel ridge regression on a
//! toy curve, and the equivalent measurement-operator expansion.
//!
//! ```bash
//! cargo run --release --example quantum_kernels
//! ```

use qmlsim::encode::EncodingSpec;
use qmlsim::kernel::{fit_measurement, gram_matrix, krr_fit, krr_predict};

fn main() -> qmlsim::Result<()> {
    // 1-feature angle encoding: k(x, x′) = cos²((x − x′)/2)
    let spec = EncodingSpec::angle(1)?;
    let xs: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64 * 0.35]).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (1.7 * x[0]).sin()).collect();

    let gram = gram_matrix(&xs, &spec)?;
    println!("Gram matrix ({} samples):", xs.len());
    for i in 0..gram.nrows() {
        let row: Vec<String> = (0..gram.ncols()).map(|j| format!("{:.3}", gram[(i, j)])).collect();
        println!("  [{}]", row.join(", "));
    }

    let model = krr_fit(&xs, &ys, &spec, 1e-4)?;
    println!("\nkernel ridge regression (γ = 1e-4):");
    println!("  x      target   prediction");
    for probe in [0.2, 0.9, 1.8, 2.4] {
        let pred = krr_predict(&model, &[probe])?;
        println!("  {probe:.2}   {:+.4}  {pred:+.4}", (1.7 * probe).sin());
    }

    // the same predictor as an explicit measurement expansion Σ γ_k ρ(x^k)
    let expansion = fit_measurement(&xs, &ys, &spec)?;
    let x_probe = [1.3];
    println!(
        "\nmeasurement expansion at x = {}: tr(ρ(x)·M) = {:+.4}, kernel form = {:+.4}",
        x_probe[0],
        expansion.predict(&x_probe)?,
        krr_predict(&krr_fit(&xs, &ys, &spec, 0.0)?, &x_probe)?
    );
    Ok(())
}
