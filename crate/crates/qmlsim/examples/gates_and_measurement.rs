//! Build a Bell pair gate by gate, inspect the amplitudes, sample
//! measurement shots, and take Pauli expectations.
//!
//! ```bash
//! cargo run --release --example gates_and_measurement
//! ```

use qmlsim::core::{
    apply, expectation, measure_shots, standard_gate, state_pmf, PauliString, StateVector,
};

fn main() -> qmlsim::Result<()> {
    // |00⟩ → (H ⊗ I) → CNOT → (|00⟩ + |11⟩)/√2
    let mut state = StateVector::basis(2, &[0, 0])?;
    state = apply(&state, &standard_gate("H", &[0])?)?;
    state = apply(&state, &standard_gate("CNOT", &[0, 1])?)?;

    println!("Bell state amplitudes:");
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        println!("  |{idx:02b}⟩  {:+.4}{:+.4}i", amp.re, amp.im);
    }

    println!("\nBorn probabilities: {:?}", state_pmf(&state));

    let shots = 10_000;
    let counts = measure_shots(&state, shots, 7)?;
    println!("\n{shots} shots (seed 7):");
    for (outcome, count) in &counts {
        println!("  |{outcome:02b}⟩ observed {count} times");
    }

    // correlated observables on the entangled pair
    for obs in ["ZZ", "XX", "ZI", "IZ"] {
        let sigma: PauliString = obs.parse()?;
        println!("  ⟨{obs}⟩ = {:+.4}", expectation(&state, &sigma)?);
    }
    Ok(())
}
