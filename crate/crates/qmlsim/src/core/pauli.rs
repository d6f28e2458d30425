//! Pauli letters and tensor-product Pauli strings.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::invalid(format!("unknown Pauli letter '{other}'"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Action on a basis bit: returns (flipped bit, phase factor).
    ///
    /// X|v⟩ = |1−v⟩, Y|v⟩ = i(−1)^v |1−v⟩, Z|v⟩ = (−1)^v |v⟩.
    pub fn basis_action(self, bit: u8) -> (u8, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Pauli::I => (bit, one),
            Pauli::X => (1 - bit, one),
            Pauli::Y => (
                1 - bit,
                if bit == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                },
            ),
            Pauli::Z => (bit, if bit == 0 { one } else { -one }),
        }
    }
}

/// A tensor product of single-qubit Paulis, one letter per qubit.
///
/// Letter `k` acts on qubit `k` (qubit 0 is the least-significant bit of a
/// basis index). Every Pauli string is Hermitian and unitary with ±1
/// eigenvalues. Serializes as its letter string, e.g. `"XZIY"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl TryFrom<String> for PauliString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::invalid("Pauli string must have at least one letter"));
        }
        Ok(PauliString { letters })
    }

    /// All-identity string on `num_qubits` qubits.
    pub fn identity(num_qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; num_qubits])
    }

    /// Single non-identity letter on `qubit`, identity elsewhere.
    pub fn single(num_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::invalid(format!(
                "qubit {qubit} out of range for {num_qubits} qubits"
            )));
        }
        let mut letters = vec![Pauli::I; num_qubits];
        letters[qubit] = p;
        Self::new(letters)
    }

    /// Two non-identity letters, identity elsewhere.
    pub fn two(num_qubits: usize, (qa, pa): (usize, Pauli), (qb, pb): (usize, Pauli)) -> Result<Self> {
        if qa >= num_qubits || qb >= num_qubits {
            return Err(Error::invalid("qubit index out of range"));
        }
        if qa == qb {
            return Err(Error::invalid("the two qubits must be distinct"));
        }
        let mut letters = vec![Pauli::I; num_qubits];
        letters[qa] = pa;
        letters[qb] = pb;
        Self::new(letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Indices of the non-identity letters.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(i, _)| i)
            .collect()
    }

    /// Precompute the bitmask form of the string's basis action:
    /// Σ|idx⟩ = base_phase · (−1)^{popcount(idx & sign_mask)} |idx ⊕ flip_mask⟩.
    ///
    /// X and Y letters contribute to `flip_mask`; Y and Z letters to
    /// `sign_mask`; each Y letter contributes a factor i to `base_phase`.
    pub fn compiled(&self) -> CompiledPauli {
        let mut flip_mask = 0usize;
        let mut sign_mask = 0usize;
        let mut base_phase = Complex64::new(1.0, 0.0);
        let i_unit = Complex64::new(0.0, 1.0);
        for (q, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip_mask |= 1 << q,
                Pauli::Y => {
                    flip_mask |= 1 << q;
                    sign_mask |= 1 << q;
                    base_phase *= i_unit;
                }
                Pauli::Z => sign_mask |= 1 << q,
            }
        }
        CompiledPauli {
            flip_mask,
            sign_mask,
            base_phase,
        }
    }

    /// Action on the computational basis state with index `idx`: a Pauli
    /// string maps each basis state to a single basis state with a phase.
    pub fn basis_action(&self, idx: usize) -> (usize, Complex64) {
        let mut out = idx;
        let mut phase = Complex64::new(1.0, 0.0);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = ((idx >> q) & 1) as u8;
            let (new_bit, f) = p.basis_action(bit);
            if new_bit != bit {
                out ^= 1 << q;
            }
            phase *= f;
        }
        (out, phase)
    }

    /// Dense matrix of the string restricted to `qubits` (in the given
    /// order, first qubit = least-significant local bit). The letters on
    /// qubits outside the slice must be identity for the restriction to
    /// equal the full operator up to tensoring with I.
    pub fn dense_on(&self, qubits: &[usize]) -> DMatrix<Complex64> {
        let k = qubits.len();
        let dim = 1usize << k;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut row = col;
            let mut phase = Complex64::new(1.0, 0.0);
            for (local, &q) in qubits.iter().enumerate() {
                let bit = ((col >> local) & 1) as u8;
                let (new_bit, f) = self.letters[q].basis_action(bit);
                if new_bit != bit {
                    row ^= 1 << local;
                }
                phase *= f;
            }
            m[(row, col)] = phase;
        }
        m
    }

    /// Full dense matrix on all qubits. Size 2^b × 2^b; desk scale only.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let all: Vec<usize> = (0..self.num_qubits()).collect();
        self.dense_on(&all)
    }
}

/// Bitmask form of a Pauli string's basis action; see
/// [`PauliString::compiled`].
#[derive(Debug, Clone, Copy)]
pub struct CompiledPauli {
    pub flip_mask: usize,
    pub sign_mask: usize,
    pub base_phase: Complex64,
}

impl CompiledPauli {
    #[inline]
    pub fn act(&self, idx: usize) -> (usize, Complex64) {
        let parity = (idx & self.sign_mask).count_ones() & 1;
        let phase = if parity == 1 {
            -self.base_phase
        } else {
            self.base_phase
        };
        (idx ^ self.flip_mask, phase)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Result<Vec<Pauli>> = s.chars().map(Pauli::from_char).collect();
        Self::new(letters?)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}
