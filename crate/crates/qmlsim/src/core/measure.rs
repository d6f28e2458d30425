//! Computational-basis measurement and observable expectations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::gate::apply_pauli;
use crate::core::pauli::PauliString;
use crate::core::state::{kahan_sum, DensityMatrix, StateVector};
use crate::error::{Error, Result};

/// Born-rule outcome distribution over basis indices: p(y) = tr(ρ Q_y),
/// i.e. the real parts of the diagonal.
pub fn born_pmf(rho: &DensityMatrix) -> Vec<f64> {
    rho.entries().diagonal().iter().map(|e| e.re).collect()
}

/// Outcome probabilities of a pure state, |a_x|².
pub fn state_pmf(state: &StateVector) -> Vec<f64> {
    state.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// Draw one basis index by inverse CDF.
pub(crate) fn sample_index(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen::<f64>() * cdf.last().copied().unwrap_or(1.0);
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1)
}

pub(crate) fn cumulative(pmf: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    pmf.iter()
        .map(|&p| {
            acc += p.max(0.0);
            acc
        })
        .collect()
}

/// Repeated measurement of all qubits in the computational basis.
///
/// Outcomes are drawn i.i.d. from the state's Born distribution; the map
/// sends basis index → count. Fixed seeds give identical counts.
pub fn measure_shots(state: &StateVector, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(Error::invalid("shots must be ≥ 1"));
    }
    let cdf = cumulative(&state_pmf(state));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(sample_index(&cdf, &mut rng)).or_insert(0u64) += 1;
    }
    Ok(counts)
}

/// ⟨ψ|Σ|ψ⟩ for a Pauli-string observable. Always real in [−1, 1].
pub fn expectation(state: &StateVector, obs: &PauliString) -> Result<f64> {
    if obs.num_qubits() != state.num_qubits() {
        return Err(Error::invalid(format!(
            "observable on {} qubits, state on {}",
            obs.num_qubits(),
            state.num_qubits()
        )));
    }
    let transformed = apply_pauli(state, obs)?;
    let val = state.inner(&transformed)?;
    debug_assert!(val.im.abs() < 1e-10, "Pauli expectation has imaginary part {}", val.im);
    Ok(val.re.clamp(-1.0, 1.0))
}

/// Sum of a pmf with compensated accumulation; tests use this to assert
/// normalization at 1e-10.
pub fn pmf_total(pmf: &[f64]) -> f64 {
    kahan_sum(pmf.iter().copied())
}
