//! Hamiltonian time evolution (exact and Trotterized), the quantum Fourier
//! transform, and stochastic-matrix iteration.
//!
//! The sign convention is |ψ(t)⟩ = e^{−iHt}|ψ(0)⟩ throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::core::gate::{self, GateOp};
use crate::core::pauli::PauliString;
use crate::core::state::{kahan_sum, StateVector};
use crate::error::{Error, Result};

/// Dense matrix exponentials stop being desk scale past this width.
pub const MAX_DENSE_QUBITS: usize = 10;

/// H = Σ_l c_l H_l with real coefficients and Pauli-string terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    terms: Vec<(f64, PauliString)>,
    num_qubits: usize,
}

impl Hamiltonian {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("Hamiltonian needs at least one term"));
        }
        if terms.iter().any(|(c, _)| !c.is_finite()) {
            return Err(Error::invalid("Hamiltonian coefficients must be finite"));
        }
        let num_qubits = terms[0].1.num_qubits();
        if terms.iter().any(|(_, s)| s.num_qubits() != num_qubits) {
            return Err(Error::invalid("all terms must act on the same qubit count"));
        }
        Ok(Hamiltonian { terms, num_qubits })
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Dense 2^b × 2^b matrix of the Hamiltonian.
    pub fn dense(&self) -> Result<DMatrix<Complex64>> {
        if self.num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::UnsupportedSize(format!(
                "dense Hamiltonian capped at {MAX_DENSE_QUBITS} qubits, got {}",
                self.num_qubits
            )));
        }
        let dim = 1usize << self.num_qubits;
        let mut h = DMatrix::zeros(dim, dim);
        for (c, sigma) in &self.terms {
            for col in 0..dim {
                let (row, phase) = sigma.basis_action(col);
                h[(row, col)] += phase * Complex64::new(*c, 0.0);
            }
        }
        Ok(h)
    }

    /// Parse the line format `coeff PAULI_LETTERS`, e.g. `0.5 XZI`.
    /// Letter k acts on qubit k. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let coeff: f64 = fields
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::format("bad coefficient", lineno + 1))?;
            let letters = fields
                .next()
                .ok_or_else(|| Error::format("missing Pauli letters", lineno + 1))?;
            if fields.next().is_some() {
                return Err(Error::format("trailing fields", lineno + 1));
            }
            let sigma: PauliString = letters
                .parse()
                .map_err(|_| Error::format(format!("bad Pauli string '{letters}'"), lineno + 1))?;
            terms.push((coeff, sigma));
        }
        Hamiltonian::new(terms).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::format(msg, 0),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, sigma) in &self.terms {
            out.push_str(&format!("{c} {sigma}\n"));
        }
        out
    }
}

/// Exact evolution e^{−iHt}|ψ⟩ via Hermitian eigendecomposition.
pub fn evolve_exact(h: &Hamiltonian, t: f64, state: &StateVector) -> Result<StateVector> {
    if state.num_qubits() != h.num_qubits() {
        return Err(Error::invalid(format!(
            "{}-qubit Hamiltonian applied to {}-qubit state",
            h.num_qubits(),
            state.num_qubits()
        )));
    }
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    let dense = h.dense()?;
    let eig = dense.symmetric_eigen();
    // e^{−iHt} = V diag(e^{−iλt}) V†
    let v = &eig.eigenvectors;
    let psi = DVector::from_column_slice(state.amplitudes());
    let mut coeffs = v.adjoint() * psi;
    for (k, c) in coeffs.iter_mut().enumerate() {
        let lambda = eig.eigenvalues[k];
        *c *= Complex64::new(0.0, -lambda * t).exp();
    }
    let out = v * coeffs;
    Ok(StateVector::from_parts_unchecked(
        state.num_qubits(),
        out.iter().copied().collect(),
    ))
}

/// The per-term exponential factors of one symmetric Trotter step of
/// length δ: e^{−iH_1δ/2} … e^{−iH_Lδ/2} followed by the same factors in
/// reverse order. Applied left factor first.
fn trotter_factors(h: &Hamiltonian, delta: f64) -> Result<Vec<GateOp>> {
    let mut gates = Vec::with_capacity(2 * h.terms.len());
    // exp(−i c δ/2 Σ) = exp(iθΣ) with θ = −c δ/2
    for (c, sigma) in &h.terms {
        gates.push(gate::exp_pauli(-c * delta / 2.0, sigma)?);
    }
    for (c, sigma) in h.terms.iter().rev() {
        gates.push(gate::exp_pauli(-c * delta / 2.0, sigma)?);
    }
    Ok(gates)
}

/// One symmetric (second-order) Trotter step U_δ ≈ e^{−iHδ} as a dense
/// unitary on the Hamiltonian's full register.
pub fn trotter_step(h: &Hamiltonian, delta: f64) -> Result<GateOp> {
    if !delta.is_finite() {
        return Err(Error::invalid("delta must be finite"));
    }
    if h.num_qubits() > MAX_DENSE_QUBITS {
        return Err(Error::UnsupportedSize(format!(
            "dense Trotter step capped at {MAX_DENSE_QUBITS} qubits"
        )));
    }
    let dim = 1usize << h.num_qubits();
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for g in trotter_factors(h, delta)? {
        // embed the support-local factor into the full register
        let full = embed(&g, h.num_qubits());
        u = full * u; // gates listed first act first: U = … · G₂ · G₁
    }
    let targets: Vec<usize> = (0..h.num_qubits()).collect();
    GateOp::from_matrix("TROTTER_STEP", targets, u, Some(delta))
}

/// Dense embedding of a gate into a `num_qubits`-wide register.
fn embed(g: &GateOp, num_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    let k = g.targets().len();
    let local_dim = 1usize << k;
    let mut spread = vec![0usize; local_dim];
    for (c, s) in spread.iter_mut().enumerate() {
        for (bit, &t) in g.targets().iter().enumerate() {
            if (c >> bit) & 1 == 1 {
                *s |= 1 << t;
            }
        }
    }
    let mask: usize = g.targets().iter().map(|&t| 1usize << t).sum();
    for base in 0..dim {
        if base & mask != 0 {
            continue;
        }
        for r in 0..local_dim {
            for c in 0..local_dim {
                m[(base | spread[r], base | spread[c])] = g.matrix()[(r, c)];
            }
        }
    }
    m
}

/// Repeated symmetric Trotter steps: applies `trotter_step(h, t/steps)`
/// `steps` times, term by term (no dense matrix is built, so this scales to
/// wide registers). Converges to [`evolve_exact`] as steps → ∞.
pub fn evolve_trotter(
    h: &Hamiltonian,
    t: f64,
    steps: u32,
    state: &StateVector,
) -> Result<StateVector> {
    if steps == 0 {
        return Err(Error::invalid("steps must be ≥ 1"));
    }
    if state.num_qubits() != h.num_qubits() {
        return Err(Error::invalid(format!(
            "{}-qubit Hamiltonian applied to {}-qubit state",
            h.num_qubits(),
            state.num_qubits()
        )));
    }
    let delta = t / steps as f64;
    // exp(−i c δ/2 Σ) = exp(iθΣ) with θ = −c δ/2; fused per-term application
    let mut angles: Vec<(f64, &PauliString)> = h
        .terms
        .iter()
        .map(|(c, sigma)| (-c * delta / 2.0, sigma))
        .collect();
    angles.extend(h.terms.iter().rev().map(|(c, sigma)| (-c * delta / 2.0, sigma)));
    let mut s = state.clone();
    for _ in 0..steps {
        for (theta, sigma) in &angles {
            s = gate::apply_exp_pauli(&s, *theta, sigma)?;
        }
    }
    Ok(s)
}

/// QFT_q |x⟩ = (1/√q) Σ_p e^{2πi p x / q} |p⟩, applied as a dense transform.
///
/// `q` must equal the state dimension and stay within 2^12.
pub fn qft(q: usize, state: &StateVector) -> Result<StateVector> {
    if state.dim() != q {
        return Err(Error::invalid(format!(
            "state dimension {} does not match q = {q}",
            state.dim()
        )));
    }
    if q > 1 << 12 {
        return Err(Error::UnsupportedSize("dense QFT capped at q = 4096".into()));
    }
    let inv_sqrt_q = 1.0 / (q as f64).sqrt();
    let src = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); q];
    for (p, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, a) in src.iter().enumerate() {
            // reduce p·x mod q before the trig call to keep phases exact
            let phase = std::f64::consts::TAU * ((p * x) % q) as f64 / q as f64;
            acc += a * Complex64::new(phase.cos(), phase.sin());
        }
        *o = acc * inv_sqrt_q;
    }
    Ok(StateVector::from_parts_unchecked(state.num_qubits(), out))
}

/// Gate decomposition of the QFT on n qubits: Hadamards and controlled
/// phases, then the bit-reversal swaps. Applying the gates in order equals
/// the dense [`qft`] on q = 2^n.
pub fn qft_gate_decomposition(num_qubits: usize) -> Result<Vec<GateOp>> {
    if num_qubits == 0 {
        return Err(Error::invalid("QFT needs at least one qubit"));
    }
    let mut gates = Vec::new();
    for w in (0..num_qubits).rev() {
        gates.push(gate::standard_gate("H", &[w])?);
        for c in (0..w).rev() {
            let angle = std::f64::consts::TAU / (1u64 << (w - c + 1)) as f64;
            gates.push(gate::controlled_phase(angle, c, w)?);
        }
    }
    // bit reversal
    for w in 0..num_qubits / 2 {
        gates.push(swap_gate(w, num_qubits - 1 - w)?);
    }
    Ok(gates)
}

fn swap_gate(a: usize, b: usize) -> Result<GateOp> {
    let one = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = one;
    m[(2, 1)] = one;
    m[(1, 2)] = one;
    m[(3, 3)] = one;
    GateOp::from_matrix("SWAP", vec![a, b], m, None)
}

/// A column-stochastic transition matrix P (entries ≥ 0, columns sum to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::invalid("transition matrix must be square and nonempty"));
        }
        if entries.iter().any(|&e| e < 0.0 || !e.is_finite()) {
            return Err(Error::invalid("transition matrix entries must be ≥ 0"));
        }
        for j in 0..entries.ncols() {
            let s = kahan_sum(entries.column(j).iter().copied());
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!(
                    "column {j} sums to {s}, expected 1 within 1e-12"
                )));
            }
        }
        Ok(StochasticMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// p^(t) = P^t p^(0). The output stays a probability vector.
pub fn markov_evolve(p0: &[f64], p: &StochasticMatrix, t: u32) -> Result<Vec<f64>> {
    if p0.len() != p.dim() {
        return Err(Error::invalid(format!(
            "distribution has {} entries, matrix is {}×{}",
            p0.len(),
            p.dim(),
            p.dim()
        )));
    }
    if p0.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::invalid("initial distribution must be nonnegative"));
    }
    let total = kahan_sum(p0.iter().copied());
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "initial distribution sums to {total}, expected 1"
        )));
    }
    let mut v = DVector::from_column_slice(p0);
    for _ in 0..t {
        v = &p.entries * v;
    }
    Ok(v.iter().copied().collect())
}
