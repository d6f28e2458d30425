//! Three routes to the same classifier gradient: exact statevector
//! contraction, central finite differences, and the shot-based
//! auxiliary-qubit interference protocol.
//!
//! ```bash
//! cargo run --release --example gradients
//! ```

use qmlsim::qnn::{hadamard_test_grad, qnn_grad_analytic, qnn_grad_fd, qnn_loss, QnnModel};

fn main() -> qmlsim::Result<()> {
    let mut model = QnnModel::two_sweep(3)?;
    model.set_theta(vec![0.35, -0.2, 0.6, 0.1, -0.45, 0.25])?;
    let z = [1i8, -1, 1];
    let label = -1i8;

    println!(
        "3 data qubits + readout, {} layers, loss = {:.6}",
        model.num_params(),
        qnn_loss(&model, &z, label)?
    );

    let analytic = qnn_grad_analytic(&model, &z, label)?;
    let fd = qnn_grad_fd(&model, &z, label, 1e-5)?;
    let shots = 200_000;

    println!("\nlayer  analytic      central diff   shot estimate ({shots} shots)");
    for k in 0..model.num_params() {
        let sampled = hadamard_test_grad(&model, &z, label, k, shots, 11 + k as u64)?;
        println!(
            "{k:5}  {:+.8}  {:+.8}   {sampled:+.6}",
            analytic[k], fd[k]
        );
    }

    let worst_fd = analytic
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("\nmax |analytic − finite difference| = {worst_fd:.3e}");
    Ok(())
}
