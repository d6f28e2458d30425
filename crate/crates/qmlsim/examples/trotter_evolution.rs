//! Second-order Trotter evolution versus the exact propagator: the error
//! shrinks roughly 4× per step-count doubling (δ³ per step, δ² overall).
//!
//! ```bash
//! cargo run --release --example trotter_evolution
//! ```

use qmlsim::core::StateVector;
use qmlsim::evolve::{evolve_exact, evolve_trotter, Hamiltonian};

fn main() -> qmlsim::Result<()> {
    let h = Hamiltonian::parse("0.5 XI\n0.5 ZZ\n0.25 IY")?;
    let t = 2.0;
    let init = StateVector::basis(2, &[0, 1])?;
    let exact = evolve_exact(&h, t, &init)?;

    println!("H = 0.5·XI + 0.5·ZZ + 0.25·IY, t = {t}");
    println!("steps   max amplitude error vs exact");
    for steps in [1u32, 2, 4, 8, 16, 32, 64, 128] {
        let approx = evolve_trotter(&h, t, steps, &init)?;
        let err = approx
            .amplitudes()
            .iter()
            .zip(exact.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        println!("{steps:5}   {err:.3e}");
    }

    println!("\nfinal state at 128 steps:");
    let final_state = evolve_trotter(&h, t, 128, &init)?;
    for (idx, a) in final_state.amplitudes().iter().enumerate() {
        println!("  |{idx:02b}⟩  {:+.4}{:+.4}i", a.re, a.im);
    }
    Ok(())
}
