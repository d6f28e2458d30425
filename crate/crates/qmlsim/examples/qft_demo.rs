//! The quantum Fourier transform two ways: the dense definition formula and
//! the Hadamard + controlled-phase gate decomposition.
//!
//! ```bash
//! cargo run --release --example qft_demo
//! ```

use qmlsim::core::{apply, StateVector};
use qmlsim::evolve::{qft, qft_gate_decomposition};

fn main() -> qmlsim::Result<()> {
    let n = 3;
    let q = 1usize << n;

    println!("QFT_{q} |5⟩ by the definition formula:");
    let dense = qft(q, &StateVector::basis_index(n, 5)?)?;
    for (p, a) in dense.amplitudes().iter().enumerate() {
        println!("  |{p}⟩  {:+.4}{:+.4}i  (magnitude {:.4})", a.re, a.im, a.norm());
    }

    let gates = qft_gate_decomposition(n)?;
    println!("\ngate decomposition uses {} gates:", gates.len());
    for g in &gates {
        println!("  {} on {:?}", g.name(), g.targets());
    }

    let mut circ = StateVector::basis_index(n, 5)?;
    for g in &gates {
        circ = apply(&circ, g)?;
    }
    let max_dev = circ
        .amplitudes()
        .iter()
        .zip(dense.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    println!("\nmax deviation between the two routes: {max_dev:.3e}");
    Ok(())
}
