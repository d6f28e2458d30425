//! Pure statevectors and density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on dense simulation width. 2^24 amplitudes is already 256 MiB.
pub const MAX_QUBITS: usize = 24;

/// Compensated (Kahan) sum; keeps norm checks honest on wide registers.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The 2^b complex amplitudes of a b-qubit pure state.
///
/// Qubit 0 is the least-significant bit of a basis index: the basis state
/// with bits (x_0, …, x_{b−1}) sits at integer index Σ_k 2^k x_k.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Basis state |x_0 … x_{b−1}⟩ from its bit list.
    pub fn basis(num_qubits: usize, bits: &[u8]) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        if bits.len() != num_qubits {
            return Err(Error::invalid(format!(
                "expected {num_qubits} bits, got {}",
                bits.len()
            )));
        }
        let mut index = 0usize;
        for (k, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => index |= 1 << k,
                other => return Err(Error::invalid(format!("bit must be 0 or 1, got {other}"))),
            }
        }
        Self::basis_index(num_qubits, index)
    }

    /// Basis state at the given integer index.
    pub fn basis_index(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Build from raw amplitudes. The length must be a power of two and the
    /// L2 norm must already be 1 within 1e-9; the stored amplitudes are then
    /// renormalized to machine precision.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count must be a power of two ≥ 2, got {dim}"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!("more than {MAX_QUBITS} qubits")));
        }
        let norm = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr())).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "amplitudes are not normalized: ‖·‖₂ = {norm}"
            )));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalize an arbitrary nonzero complex vector into a state.
    pub(crate) fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr())).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        let scaled: Vec<Complex64> = amplitudes.into_iter().map(|a| a / norm).collect();
        let dim = scaled.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count must be a power of two ≥ 2, got {dim}"
            )));
        }
        Ok(StateVector {
            num_qubits: dim.trailing_zeros() as usize,
            amplitudes: scaled,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(1usize << num_qubits, amplitudes.len());
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// L2 norm; 1 within 1e-12 for any state built by this crate.
    pub fn norm(&self) -> f64 {
        kahan_sum(self.amplitudes.iter().map(|a| a.norm_sqr())).sqrt()
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid("inner product dimension mismatch"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; `other`'s qubits become the new high-order qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!("more than {MAX_QUBITS} qubits")));
        }
        let mut amplitudes = Vec::with_capacity(1 << num_qubits);
        for b in &other.amplitudes {
            for a in &self.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }
}

/// A 2^b × 2^b Hermitian, trace-one, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Rank-1 projector ρ = |ψ⟩⟨ψ| of a pure state.
    pub fn from_pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let mut entries = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                entries[(i, j)] = state.amplitudes[i] * state.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            num_qubits: state.num_qubits,
            entries,
        }
    }

    /// Convex mixture ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|.
    pub fn mix(states: &[StateVector], probs: &[f64]) -> Result<Self> {
        if states.is_empty() || states.len() != probs.len() {
            return Err(Error::invalid(
                "mix needs equally many states and probabilities, at least one each",
            ));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::invalid("probabilities must be nonnegative and finite"));
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!(
                "probabilities must sum to 1 within 1e-10, got {total}"
            )));
        }
        let num_qubits = states[0].num_qubits;
        if states.iter().any(|s| s.num_qubits != num_qubits) {
            return Err(Error::invalid("all states must have the same qubit count"));
        }
        let dim = 1usize << num_qubits;
        let mut entries = DMatrix::zeros(dim, dim);
        for (state, &p) in states.iter().zip(probs) {
            for i in 0..dim {
                for j in 0..dim {
                    entries[(i, j)] += p * state.amplitudes[i] * state.amplitudes[j].conj();
                }
            }
        }
        Ok(DensityMatrix { num_qubits, entries })
    }

    /// Build from raw entries, validating Hermiticity (1e-10 entrywise),
    /// unit trace (1e-10) and positive semidefiniteness (eigenvalues ≥ −1e-9).
    pub fn from_entries(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim < 2 || !dim.is_power_of_two() || entries.ncols() != dim {
            return Err(Error::invalid("entries must be square with power-of-two size"));
        }
        let dm = DensityMatrix {
            num_qubits: dim.trailing_zeros() as usize,
            entries,
        };
        dm.validate()?;
        Ok(dm)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diagonal().iter().sum()
    }

    /// tr(ρ²); equals 1 exactly on pure states, below 1 on proper mixtures.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
        kahan_sum(self.entries.iter().map(|e| e.norm_sqr()))
    }

    /// tr(ρ σ), real for Hermitian arguments.
    pub fn product_trace(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid("product trace dimension mismatch"));
        }
        // tr(ρσ) = Σ_ij ρ_ij σ_ji = Σ_ij ρ_ij conj(σ_ij) for Hermitian σ.
        let val: Complex64 = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(val.re)
    }

    /// Eigenvalues of the (Hermitian) matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.entries.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Check the density-matrix invariants; used by `from_entries` and tests.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                if d > 1e-10 {
                    return Err(Error::Numerical(format!(
                        "not Hermitian: entry ({i},{j}) deviates by {d}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!("trace is {tr}, expected 1")));
        }
        if let Some(&min) = self
            .eigenvalues()
            .first()
        {
            if min < -1e-9 {
                return Err(Error::Numerical(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_state_zero() {
        // (1, [0]) → |0⟩ = (1, 0)
        let s = StateVector::basis(1, &[0]).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert_eq!(s.amplitudes()[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn basis_index_is_little_endian() {
        // bits (x_0, x_1) = (1, 0) → index Σ 2^k x_k = 1
        let s = StateVector::basis(2, &[1, 0]).unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::new(1.0, 0.0));
        // all-ones on three qubits → index 7
        let s = StateVector::basis(3, &[1, 1, 1]).unwrap();
        assert_eq!(s.amplitudes()[7], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn basis_rejects_bad_input() {
        assert!(StateVector::basis(2, &[1]).is_err());
        assert!(StateVector::basis(2, &[1, 2]).is_err());
        assert!(StateVector::basis(0, &[]).is_err());
    }

    #[test]
    fn from_amplitudes_checks_norm() {
        let bad = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(StateVector::from_amplitudes(bad).is_err());
        let ok = vec![Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)];
        let s = StateVector::from_amplitudes(ok).unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pure_density_is_projector() {
        let s = StateVector::basis(1, &[0]).unwrap();
        let rho = DensityMatrix::from_pure(&s);
        assert_eq!(rho.entries()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(rho.entries()[(1, 1)], Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn plus_state_density_is_all_halves() {
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = StateVector::from_amplitudes(vec![amp, amp]).unwrap();
        let rho = DensityMatrix::from_pure(&s);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(rho.entries()[(i, j)].re, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(rho.entries()[(i, j)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn equal_mix_is_maximally_mixed() {
        let zero = StateVector::basis(1, &[0]).unwrap();
        let one = StateVector::basis(1, &[1]).unwrap();
        let rho = DensityMatrix::mix(&[zero, one], &[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-12);
        assert!(rho.eigenvalues().iter().all(|&v| v >= -1e-9));
    }

    #[test]
    fn single_state_mix_equals_projector() {
        let s = StateVector::basis(2, &[1, 0]).unwrap();
        let a = DensityMatrix::mix(std::slice::from_ref(&s), &[1.0]).unwrap();
        let b = DensityMatrix::from_pure(&s);
        assert!((a.entries() - b.entries()).norm() < 1e-14);
    }

    #[test]
    fn mix_rejects_bad_probs() {
        let s = StateVector::basis(1, &[0]).unwrap();
        assert!(DensityMatrix::mix(std::slice::from_ref(&s), &[0.9]).is_err());
        assert!(DensityMatrix::mix(std::slice::from_ref(&s), &[-1.0]).is_err());
    }
}
