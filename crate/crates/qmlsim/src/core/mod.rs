//! Dense statevector and density-matrix simulation: state construction,
//! gates, circuits, computational-basis measurement and Pauli expectations.

pub mod circuit;
pub mod gate;
pub mod measure;
pub mod pauli;
pub mod state;

pub use circuit::{run_circuit, Circuit, CircuitOp};
pub use gate::{
    apply, apply_exp_pauli, apply_pauli, controlled_phase, exp_pauli, rotation_gate,
    standard_gate, Axis, GateOp,
};
pub use measure::{born_pmf, expectation, measure_shots, state_pmf};
pub use pauli::{Pauli, PauliString};
pub use state::{DensityMatrix, StateVector, MAX_QUBITS};

/// Basis state from a bit list; bit k is qubit k (least-significant first).
pub fn init_basis_state(num_qubits: usize, bits: &[u8]) -> crate::error::Result<StateVector> {
    StateVector::basis(num_qubits, bits)
}

/// ρ = |ψ⟩⟨ψ|.
pub fn to_density(state: &StateVector) -> DensityMatrix {
    DensityMatrix::from_pure(state)
}

/// ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|.
pub fn mix_ensemble(states: &[StateVector], probs: &[f64]) -> crate::error::Result<DensityMatrix> {
    DensityMatrix::mix(states, probs)
}
