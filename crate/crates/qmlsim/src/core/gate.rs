//! Gate construction and statevector gate application.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::core::pauli::PauliString;
use crate::core::state::StateVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A concrete unitary acting on an ordered list of target qubits.
///
/// For k targets the matrix is 2^k × 2^k; target `m` is the m-th bit
/// (least significant first) of the local basis index, matching the global
/// little-endian convention.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    name: String,
    targets: Vec<usize>,
    matrix: DMatrix<Complex64>,
    parameter: Option<f64>,
}

impl GateOp {
    /// Wrap an arbitrary unitary. Checks U·U† = I within 1e-10.
    pub fn from_matrix(
        name: impl Into<String>,
        targets: Vec<usize>,
        matrix: DMatrix<Complex64>,
        parameter: Option<f64>,
    ) -> Result<Self> {
        let k = targets.len();
        let dim = 1usize << k;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::invalid(format!(
                "matrix must be {dim}×{dim} for {k} targets"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if !targets.iter().all(|t| seen.insert(*t)) {
            return Err(Error::invalid("duplicate target qubit"));
        }
        let gate = GateOp {
            name: name.into(),
            targets,
            matrix,
            parameter,
        };
        if !gate.is_unitary(1e-10) {
            return Err(Error::invalid(format!("gate '{}' is not unitary", gate.name)));
        }
        Ok(gate)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let dim = self.matrix.nrows();
        let prod = &self.matrix * self.matrix.adjoint();
        let id = DMatrix::<Complex64>::identity(dim, dim);
        (prod - id).iter().all(|e| e.norm() <= tol)
    }

    /// The Hermitian adjoint (inverse) of this gate.
    pub fn dagger(&self) -> GateOp {
        GateOp {
            name: format!("{}†", self.name),
            targets: self.targets.clone(),
            matrix: self.matrix.adjoint(),
            parameter: self.parameter.map(|p| -p),
        }
    }
}

/// Fixed-matrix gates by name: X, Y, Z, H, NOT (≡ X), CNOT, CZ.
///
/// One target for the single-qubit gates; CNOT takes (control, target) and
/// CZ any two distinct qubits.
pub fn standard_gate(name: &str, targets: &[usize]) -> Result<GateOp> {
    let upper = name.to_ascii_uppercase();
    let expect_arity = |k: usize| -> Result<()> {
        if targets.len() != k {
            return Err(Error::invalid(format!(
                "gate {upper} takes {k} target(s), got {}",
                targets.len()
            )));
        }
        Ok(())
    };
    let m1 = |entries: [Complex64; 4]| DMatrix::from_row_slice(2, 2, &entries);
    let matrix = match upper.as_str() {
        "X" | "NOT" => {
            expect_arity(1)?;
            m1([ZERO, ONE, ONE, ZERO])
        }
        "Y" => {
            expect_arity(1)?;
            m1([ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO])
        }
        "Z" => {
            expect_arity(1)?;
            m1([ONE, ZERO, ZERO, -ONE])
        }
        "H" => {
            expect_arity(1)?;
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            m1([h, h, h, -h])
        }
        "CNOT" => {
            expect_arity(2)?;
            // control = local bit 0, target = local bit 1
            let mut m = DMatrix::zeros(4, 4);
            m[(0, 0)] = ONE;
            m[(2, 2)] = ONE;
            m[(3, 1)] = ONE;
            m[(1, 3)] = ONE;
            m
        }
        "CZ" => {
            expect_arity(2)?;
            let mut m = DMatrix::identity(4, 4);
            m[(3, 3)] = -ONE;
            m
        }
        other => return Err(Error::invalid(format!("unknown gate name '{other}'"))),
    };
    GateOp::from_matrix(upper, targets.to_vec(), matrix, None)
}

/// Axis for a single-qubit rotation gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_lowercase() {
            'x' => Ok(Axis::X),
            'y' => Ok(Axis::Y),
            'z' => Ok(Axis::Z),
            other => Err(Error::invalid(format!("unknown rotation axis '{other}'"))),
        }
    }
}

/// Single-qubit rotation R_a(φ) = e^{−iφσ_a/2}.
///
/// R_x(φ) = [[cos(φ/2), −i sin(φ/2)], [−i sin(φ/2), cos(φ/2)]].
pub fn rotation_gate(axis: Axis, angle: f64, target: usize) -> Result<GateOp> {
    if !angle.is_finite() {
        return Err(Error::invalid("rotation angle must be finite"));
    }
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let matrix = match axis {
        Axis::X => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
        ),
        Axis::Y => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        ),
        Axis::Z => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, -s),
                ZERO,
                ZERO,
                Complex64::new(c, s),
            ],
        ),
    };
    let name = match axis {
        Axis::X => "RX",
        Axis::Y => "RY",
        Axis::Z => "RZ",
    };
    GateOp::from_matrix(name, vec![target], matrix, Some(angle))
}

/// exp(iθΣ) = cos(θ)·I + i·sin(θ)·Σ for a Pauli string Σ (since Σ² = I).
///
/// The returned gate acts on the string's non-identity support; an
/// all-identity string yields the global phase e^{iθ} applied on qubit 0.
pub fn exp_pauli(theta: f64, sigma: &PauliString) -> Result<GateOp> {
    if !theta.is_finite() {
        return Err(Error::invalid("theta must be finite"));
    }
    let support = sigma.support();
    let (targets, local): (Vec<usize>, DMatrix<Complex64>) = if support.is_empty() {
        (vec![0], DMatrix::identity(2, 2))
    } else {
        let local = sigma.dense_on(&support);
        (support, local)
    };
    let dim = local.nrows();
    let cos = Complex64::new(theta.cos(), 0.0);
    let isin = Complex64::new(0.0, theta.sin());
    let matrix = DMatrix::identity(dim, dim) * cos + local * isin;
    GateOp::from_matrix(format!("exp(iθ·{sigma})"), targets, matrix, Some(theta))
}

/// Two-qubit controlled phase: diag(1, 1, 1, e^{iφ}). Symmetric in its
/// qubits; used by the QFT gate decomposition.
pub fn controlled_phase(phi: f64, qubit_a: usize, qubit_b: usize) -> Result<GateOp> {
    if !phi.is_finite() {
        return Err(Error::invalid("phase must be finite"));
    }
    let mut m = DMatrix::identity(4, 4);
    m[(3, 3)] = Complex64::new(phi.cos(), phi.sin());
    GateOp::from_matrix("CPHASE", vec![qubit_a, qubit_b], m, Some(phi))
}

/// Apply a gate to a state, returning the new state. Norm is preserved.
pub fn apply(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let b = state.num_qubits();
    if let Some(&t) = gate.targets().iter().find(|&&t| t >= b) {
        return Err(Error::invalid(format!(
            "target qubit {t} out of range for {b}-qubit state"
        )));
    }
    let k = gate.targets().len();
    let local_dim = 1usize << k;
    let dim = state.dim();

    // spread[c]: local index bits distributed onto the global target bits
    let mut spread = vec![0usize; local_dim];
    for (c, s) in spread.iter_mut().enumerate() {
        for (m, &t) in gate.targets().iter().enumerate() {
            if (c >> m) & 1 == 1 {
                *s |= 1 << t;
            }
        }
    }
    let target_mask: usize = gate.targets().iter().map(|&t| 1usize << t).sum();

    // row-major copy of the matrix keeps the inner loop free of nalgebra
    // index bookkeeping
    let mut mat = vec![ZERO; local_dim * local_dim];
    for r in 0..local_dim {
        for c in 0..local_dim {
            mat[r * local_dim + c] = gate.matrix()[(r, c)];
        }
    }

    let src = state.amplitudes();
    let mut dst = vec![ZERO; dim];
    for base in 0..dim {
        if base & target_mask != 0 {
            continue;
        }
        for r in 0..local_dim {
            let mut acc = ZERO;
            for c in 0..local_dim {
                acc += mat[r * local_dim + c] * src[base | spread[c]];
            }
            dst[base | spread[r]] = acc;
        }
    }
    Ok(StateVector::from_parts_unchecked(b, dst))
}

/// Apply a Pauli string to a state without materializing its matrix.
pub fn apply_pauli(state: &StateVector, sigma: &PauliString) -> Result<StateVector> {
    if sigma.num_qubits() != state.num_qubits() {
        return Err(Error::invalid(format!(
            "Pauli string on {} qubits applied to {}-qubit state",
            sigma.num_qubits(),
            state.num_qubits()
        )));
    }
    let compiled = sigma.compiled();
    let src = state.amplitudes();
    let mut dst = vec![ZERO; state.dim()];
    for (idx, amp) in src.iter().enumerate() {
        let (out, phase) = compiled.act(idx);
        dst[out] = phase * amp;
    }
    Ok(StateVector::from_parts_unchecked(state.num_qubits(), dst))
}

/// Apply exp(iθΣ)|ψ⟩ = cos(θ)|ψ⟩ + i·sin(θ)·Σ|ψ⟩ in a single fused pass.
///
/// Equivalent to `apply(state, &exp_pauli(theta, sigma)?)` but avoids the
/// dense local matrix; this is the hot path of variational training.
pub fn apply_exp_pauli(state: &StateVector, theta: f64, sigma: &PauliString) -> Result<StateVector> {
    if sigma.num_qubits() != state.num_qubits() {
        return Err(Error::invalid(format!(
            "Pauli string on {} qubits applied to {}-qubit state",
            sigma.num_qubits(),
            state.num_qubits()
        )));
    }
    if !theta.is_finite() {
        return Err(Error::invalid("theta must be finite"));
    }
    let compiled = sigma.compiled();
    let cos = Complex64::new(theta.cos(), 0.0);
    let isin_base = Complex64::new(0.0, theta.sin()) * compiled.base_phase;
    let src = state.amplitudes();
    let mut dst = vec![ZERO; state.dim()];
    for (idx, amp) in src.iter().enumerate() {
        let parity = (idx & compiled.sign_mask).count_ones() & 1;
        let coupled = if parity == 1 { -isin_base } else { isin_base };
        dst[idx ^ compiled.flip_mask] += coupled * amp;
        dst[idx] += cos * amp;
    }
    Ok(StateVector::from_parts_unchecked(state.num_qubits(), dst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn x_flips_basis_state() {
        let x = standard_gate("X", &[0]).unwrap();
        let s = apply(&StateVector::basis(1, &[0]).unwrap(), &x).unwrap();
        assert!(close(s.amplitudes()[1], ONE, 1e-15));
    }

    #[test]
    fn not_is_x_and_swaps_amplitudes() {
        let not = standard_gate("not", &[0]).unwrap();
        let a0 = Complex64::new(0.6, 0.0);
        let a1 = Complex64::new(0.0, 0.8);
        let s = StateVector::from_amplitudes(vec![a0, a1]).unwrap();
        let out = apply(&s, &not).unwrap();
        assert!(close(out.amplitudes()[0], a1, 1e-15));
        assert!(close(out.amplitudes()[1], a0, 1e-15));
    }

    #[test]
    fn hadamard_makes_plus_state() {
        let h = standard_gate("H", &[0]).unwrap();
        let s = apply(&StateVector::basis(1, &[0]).unwrap(), &h).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
    }

    #[test]
    fn unknown_gate_and_bad_arity_rejected() {
        assert!(standard_gate("FOO", &[0]).is_err());
        assert!(standard_gate("X", &[0, 1]).is_err());
        assert!(standard_gate("CNOT", &[0]).is_err());
    }

    #[test]
    fn rotation_identities() {
        let id = rotation_gate(Axis::X, 0.0, 0).unwrap();
        let eye = DMatrix::<Complex64>::identity(2, 2);
        assert!((id.matrix() - &eye).norm() < 1e-15);

        // R_x(π)|0⟩ = −i|1⟩
        let rx = rotation_gate(Axis::X, PI, 0).unwrap();
        let s = apply(&StateVector::basis(1, &[0]).unwrap(), &rx).unwrap();
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, -1.0), 1e-12));

        // R_x(φ)·R_x(−φ) = I
        let fwd = rotation_gate(Axis::X, 0.7331, 0).unwrap();
        let bwd = rotation_gate(Axis::X, -0.7331, 0).unwrap();
        let prod = fwd.matrix() * bwd.matrix();
        assert!((prod - eye).norm() < 1e-12);

        assert!(rotation_gate(Axis::X, f64::NAN, 0).is_err());
    }

    #[test]
    fn exp_pauli_half_pi_x_is_ix() {
        let sigma: PauliString = "X".parse().unwrap();
        let g = exp_pauli(PI / 2.0, &sigma).unwrap();
        // iX
        assert!(close(g.matrix()[(0, 1)], Complex64::new(0.0, 1.0), 1e-12));
        assert!(close(g.matrix()[(1, 0)], Complex64::new(0.0, 1.0), 1e-12));
        assert!(close(g.matrix()[(0, 0)], ZERO, 1e-12));
    }

    #[test]
    fn exp_pauli_zero_angle_is_identity() {
        let sigma: PauliString = "XZ".parse().unwrap();
        let g = exp_pauli(0.0, &sigma).unwrap();
        let eye = DMatrix::<Complex64>::identity(4, 4);
        assert!((g.matrix() - eye).norm() < 1e-15);
    }

    #[test]
    fn exp_pauli_of_identity_string_is_a_global_phase() {
        let sigma: PauliString = "II".parse().unwrap();
        let g = exp_pauli(PI / 3.0, &sigma).unwrap();
        assert_eq!(g.targets(), &[0]);
        let phase = Complex64::new((PI / 3.0).cos(), (PI / 3.0).sin());
        assert!(close(g.matrix()[(0, 0)], phase, 1e-12));
        assert!(close(g.matrix()[(1, 1)], phase, 1e-12));
        assert!(close(g.matrix()[(0, 1)], ZERO, 1e-12));
    }

    #[test]
    fn exp_pauli_matches_series_oracle() {
        // dense matrix exponential by Taylor series, independent of the
        // cos/sin closed form
        fn expm_series(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
            let dim = m.nrows();
            let mut sum = DMatrix::<Complex64>::identity(dim, dim);
            let mut term = DMatrix::<Complex64>::identity(dim, dim);
            for k in 1..60 {
                term = (&term * m) / Complex64::new(k as f64, 0.0);
                sum += &term;
            }
            sum
        }
        for s in ["XZY", "YZXI", "XXYZ"] {
            let sigma: PauliString = s.parse().unwrap();
            for &theta in &[0.3, -1.2, 2.9] {
                let g = exp_pauli(theta, &sigma).unwrap();
                // embed the support-local gate back into the full register
                let support = sigma.support();
                let mut probe_ok = true;
                let local = sigma.dense_on(&support);
                let dim = local.nrows();
                let arg = local * Complex64::new(0.0, theta);
                let oracle = expm_series(&arg);
                for r in 0..dim {
                    for c in 0..dim {
                        if (g.matrix()[(r, c)] - oracle[(r, c)]).norm() > 1e-9 {
                            probe_ok = false;
                        }
                    }
                }
                assert!(probe_ok, "exp(i{theta}·{s}) disagrees with the series oracle");
            }
        }
    }

    #[test]
    fn exp_pauli_is_unitary_for_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..20 {
            let s: String = (0..3).map(|_| letters[rng.gen_range(0..4)]).collect();
            let sigma: PauliString = s.parse().unwrap();
            let theta: f64 = rng.gen_range(-3.0..3.0);
            let g = exp_pauli(theta, &sigma).unwrap();
            assert!(g.is_unitary(1e-10), "exp(i{theta}·{s}) not unitary");
        }
    }

    #[test]
    fn cnot_entangles_plus_state() {
        // CNOT (H⊗I)|00⟩ = (|00⟩ + |11⟩)/√2
        let h = standard_gate("H", &[0]).unwrap();
        let cnot = standard_gate("CNOT", &[0, 1]).unwrap();
        let s0 = StateVector::basis(2, &[0, 0]).unwrap();
        let s = apply(&apply(&s0, &h).unwrap(), &cnot).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes()[0], Complex64::new(r, 0.0), 1e-12));
        assert!(close(s.amplitudes()[1], ZERO, 1e-12));
        assert!(close(s.amplitudes()[2], ZERO, 1e-12));
        assert!(close(s.amplitudes()[3], Complex64::new(r, 0.0), 1e-12));
    }

    #[test]
    fn apply_rejects_out_of_range_target() {
        let x = standard_gate("X", &[3]).unwrap();
        let s = StateVector::basis(2, &[0, 0]).unwrap();
        assert!(apply(&s, &x).is_err());
    }

    #[test]
    fn apply_preserves_norm() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let raw: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut s = StateVector::normalized(raw).unwrap();
        for name in ["H", "X", "Y", "Z"] {
            for t in 0..3 {
                s = apply(&s, &standard_gate(name, &[t]).unwrap()).unwrap();
            }
        }
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fused_exp_pauli_matches_dense_gate() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..20 {
            let s: String = (0..4).map(|_| letters[rng.gen_range(0..4)]).collect();
            let sigma: PauliString = s.parse().unwrap();
            let theta: f64 = rng.gen_range(-3.0..3.0);
            let raw: Vec<Complex64> = (0..16)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let state = StateVector::normalized(raw).unwrap();
            let fused = apply_exp_pauli(&state, theta, &sigma).unwrap();
            let dense = apply(&state, &exp_pauli(theta, &sigma).unwrap()).unwrap();
            for (a, b) in fused.amplitudes().iter().zip(dense.amplitudes()) {
                assert!((a - b).norm() < 1e-12, "exp(i{theta}·{s})");
            }
        }
    }

    #[test]
    fn apply_pauli_matches_dense_apply() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let raw: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = StateVector::normalized(raw).unwrap();
        let sigma: PauliString = "YXZ".parse().unwrap();
        let fast = apply_pauli(&s, &sigma).unwrap();
        let dense = GateOp::from_matrix("Σ", vec![0, 1, 2], sigma.dense(), None).unwrap();
        let slow = apply(&s, &dense).unwrap();
        for (a, b) in fast.amplitudes().iter().zip(slow.amplitudes()) {
            assert!(close(*a, *b, 1e-12));
        }
    }
}
