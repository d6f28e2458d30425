//! Pseudo-inverse linear regression and Gaussian-process prediction on a
//! noisy 1-D curve.
//!
//! ```bash
//! cargo run --release --example regression_gp
//! ```

use nalgebra::DMatrix;
use qmlsim::regress::{gp_fit, gp_predict, pinv_fit, pinv_predict, GpKernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> qmlsim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 12;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 * 0.5).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| x.sin() + 0.05 * rng.gen_range(-1.0..1.0))
        .collect();

    // quadratic polynomial features through the pseudo-inverse
    let design = DMatrix::from_fn(n, 3, |i, j| xs[i].powi(j as i32));
    let linear = pinv_fit(&design, &ys)?;
    println!(
        "polynomial fit rank {}, coefficients {:?}",
        linear.rank(),
        linear
            .coefficients()
            .iter()
            .map(|c| (c * 1000.0).round() / 1000.0)
            .collect::<Vec<_>>()
    );

    // Gaussian process with an RBF kernel
    let inputs: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    let gp = gp_fit(&inputs, &ys, GpKernel::Rbf { bandwidth: 0.8 }, 1e-4)?;

    println!("\n  x     truth     poly      GP mean   GP ±2σ");
    for i in 0..=12 {
        let x = i as f64 * 0.5 - 0.25;
        let truth = x.sin();
        let poly = pinv_predict(&linear, &[1.0, x, x * x])?;
        let (mean, var) = gp_predict(&gp, &[x])?;
        println!(
            "{x:5.2}  {truth:+.4}   {poly:+.4}   {mean:+.4}   ±{:.4}",
            2.0 * var.sqrt()
        );
    }
    Ok(())
}
