//! The same "iterate map" idea in two regimes: unitary statevector
//! evolution conserves the L2 norm, stochastic-matrix evolution conserves
//! the L1 norm and converges to its stationary distribution.
//!
//! ```bash
//! cargo run --release --example markov_vs_unitary
//! ```

use nalgebra::DMatrix;
use qmlsim::core::StateVector;
use qmlsim::evolve::{evolve_exact, markov_evolve, Hamiltonian, StochasticMatrix};

fn main() -> qmlsim::Result<()> {
    // unitary side: |ψ(t)⟩ = e^{−iHt}|ψ(0)⟩
    let h = Hamiltonian::parse("0.6 XZ\n0.4 ZX")?;
    let psi0 = StateVector::basis(2, &[0, 0])?;
    println!("unitary evolution of |00⟩ under H = 0.6·XZ + 0.4·ZX");
    println!("  t     P(00)    P(01)    P(10)    P(11)    ‖ψ‖");
    for step in 0..=5 {
        let t = step as f64 * 0.6;
        let psi = evolve_exact(&h, t, &psi0)?;
        let p: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        println!(
            "{t:5.2}  {:.4}   {:.4}   {:.4}   {:.4}   {:.12}",
            p[0], p[1], p[2], p[3], psi.norm()
        );
    }

    // stochastic side: p(t) = Pᵗ p(0) with a lazy random walk on 4 states
    let p = StochasticMatrix::new(DMatrix::from_row_slice(
        4,
        4,
        &[
            0.5, 0.25, 0.0, 0.25, //
            0.25, 0.5, 0.25, 0.0, //
            0.0, 0.25, 0.5, 0.25, //
            0.25, 0.0, 0.25, 0.5,
        ],
    ))?;
    let p0 = vec![1.0, 0.0, 0.0, 0.0];
    println!("\nstochastic evolution of (1,0,0,0) under a lazy ring walk");
    println!("  t    distribution                          Σp");
    for t in [0u32, 1, 2, 5, 20, 100] {
        let pt = markov_evolve(&p0, &p, t)?;
        let total: f64 = pt.iter().sum();
        println!(
            "{t:4}   [{:.4}, {:.4}, {:.4}, {:.4}]   {total:.12}",
            pt[0], pt[1], pt[2], pt[3]
        );
    }
    Ok(())
}
