//! Ordered gate lists with optional parameter slots, plus the line-based
//! text format used by the CLI and test fixtures.
//!
//! Text grammar, one op per line, case-insensitive:
//!
//! ```text
//! GATE target[,target] [param_slot]
//! ```
//!
//! Fixed gates (`X`, `Y`, `Z`, `H`, `NOT`, `CNOT`, `CZ`) take no slot;
//! rotations (`RX`, `RY`, `RZ`) and Pauli exponentials (`EXP<letters>`,
//! e.g. `EXPXY 0,3 1` for exp(iθ·X₀Y₃) bound to slot 1) require one.
//! Blank lines and `#` comments are ignored.

use crate::core::gate::{self, Axis, GateOp};
use crate::core::pauli::{Pauli, PauliString};
use crate::core::state::StateVector;
use crate::error::{Error, Result};

/// One circuit entry: either a frozen unitary or a parameterized family
/// bound to a slot of the circuit's parameter vector.
#[derive(Debug, Clone)]
pub enum CircuitOp {
    Fixed(GateOp),
    Rotation {
        axis: Axis,
        target: usize,
        slot: usize,
    },
    PauliExp {
        letters: Vec<Pauli>,
        targets: Vec<usize>,
        slot: usize,
    },
}

impl CircuitOp {
    fn targets(&self) -> Vec<usize> {
        match self {
            CircuitOp::Fixed(g) => g.targets().to_vec(),
            CircuitOp::Rotation { target, .. } => vec![*target],
            CircuitOp::PauliExp { targets, .. } => targets.clone(),
        }
    }

    /// Materialize the gate for a concrete parameter vector.
    fn bind(&self, theta: &[f64]) -> Result<GateOp> {
        match self {
            CircuitOp::Fixed(g) => Ok(g.clone()),
            CircuitOp::Rotation { axis, target, slot } => {
                gate::rotation_gate(*axis, theta[*slot], *target)
            }
            CircuitOp::PauliExp {
                letters,
                targets,
                slot,
            } => {
                let width = targets.iter().max().map_or(1, |m| m + 1);
                let mut full = vec![Pauli::I; width];
                for (p, &t) in letters.iter().zip(targets) {
                    full[t] = *p;
                }
                let sigma = PauliString::new(full)?;
                let g = gate::exp_pauli(theta[*slot], &sigma)?;
                // exp_pauli targets the support; for an all-I generator it
                // falls back to qubit 0, which stays in range here.
                Ok(g)
            }
        }
    }
}

/// An ordered list of gates on a fixed-width register. Gates are applied
/// in list order (the first entry acts first).
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<CircuitOp>,
    num_params: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
            num_params: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        if let Some(&t) = targets.iter().find(|&&t| t >= self.num_qubits) {
            return Err(Error::invalid(format!(
                "target qubit {t} out of range for {}-qubit circuit",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn note_slot(&mut self, slot: usize) {
        self.num_params = self.num_params.max(slot + 1);
    }

    /// Append a frozen unitary.
    pub fn push_gate(&mut self, gate: GateOp) -> Result<&mut Self> {
        self.check_targets(gate.targets())?;
        self.ops.push(CircuitOp::Fixed(gate));
        Ok(self)
    }

    /// Append a named fixed gate (see [`gate::standard_gate`]).
    pub fn push_standard(&mut self, name: &str, targets: &[usize]) -> Result<&mut Self> {
        self.push_gate(gate::standard_gate(name, targets)?)
    }

    /// Append a rotation bound to a parameter slot.
    pub fn push_rotation(&mut self, axis: Axis, target: usize, slot: usize) -> Result<&mut Self> {
        self.check_targets(&[target])?;
        self.ops.push(CircuitOp::Rotation { axis, target, slot });
        self.note_slot(slot);
        Ok(self)
    }

    /// Append exp(iθΣ) with θ bound to a parameter slot. `sigma` is given on
    /// the full circuit width; only its support is stored.
    pub fn push_exp_pauli(&mut self, sigma: &PauliString, slot: usize) -> Result<&mut Self> {
        if sigma.num_qubits() > self.num_qubits {
            return Err(Error::invalid(format!(
                "Pauli string on {} qubits exceeds circuit width {}",
                sigma.num_qubits(),
                self.num_qubits
            )));
        }
        let support = sigma.support();
        let (letters, targets) = if support.is_empty() {
            (vec![Pauli::I], vec![0])
        } else {
            (
                support.iter().map(|&q| sigma.letters()[q]).collect(),
                support,
            )
        };
        self.ops.push(CircuitOp::PauliExp {
            letters,
            targets,
            slot,
        });
        self.note_slot(slot);
        Ok(self)
    }

    /// Materialize the whole gate sequence for a parameter vector.
    pub fn gate_sequence(&self, theta: &[f64]) -> Result<Vec<GateOp>> {
        if theta.len() != self.num_params {
            return Err(Error::invalid(format!(
                "expected {} parameters, got {}",
                self.num_params,
                theta.len()
            )));
        }
        self.ops.iter().map(|op| op.bind(theta)).collect()
    }

    /// Run the circuit on a state (first listed gate acts first).
    pub fn run(&self, theta: &[f64], state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::invalid(format!(
                "{}-qubit circuit applied to {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let gates = self.gate_sequence(theta)?;
        let mut s = state.clone();
        for g in &gates {
            s = gate::apply(&s, g)?;
        }
        Ok(s)
    }

    /// Parse the line-based text format.
    pub fn parse(text: &str, num_qubits: usize) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let name = fields.next().unwrap().to_ascii_uppercase();
            let targets_str = fields
                .next()
                .ok_or_else(|| Error::format(format!("missing targets after '{name}'"), lineno + 1))?;
            let targets: Vec<usize> = targets_str
                .split(',')
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::format(format!("bad target '{t}'"), lineno + 1))
                })
                .collect::<Result<_>>()?;
            let slot: Option<usize> = match fields.next() {
                Some(s) => Some(
                    s.parse::<usize>()
                        .map_err(|_| Error::format(format!("bad param slot '{s}'"), lineno + 1))?,
                ),
                None => None,
            };
            if fields.next().is_some() {
                return Err(Error::format("trailing fields", lineno + 1));
            }

            let map_err = |e: Error| match e {
                Error::InvalidArgument(msg) => Error::format(msg, lineno + 1),
                other => other,
            };
            if let Some(rest) = name.strip_prefix("EXP") {
                let slot = slot
                    .ok_or_else(|| Error::format("EXP gate requires a param slot", lineno + 1))?;
                let letters: Vec<Pauli> = rest
                    .chars()
                    .map(Pauli::from_char)
                    .collect::<Result<_>>()
                    .map_err(map_err)?;
                if letters.len() != targets.len() {
                    return Err(Error::format(
                        format!(
                            "EXP gate has {} letters but {} targets",
                            letters.len(),
                            targets.len()
                        ),
                        lineno + 1,
                    ));
                }
                circuit.check_targets(&targets).map_err(map_err)?;
                circuit.ops.push(CircuitOp::PauliExp {
                    letters,
                    targets,
                    slot,
                });
                circuit.note_slot(slot);
            } else if let Some(axis) = name
                .strip_prefix('R')
                .filter(|r| r.len() == 1)
                .and_then(|r| Axis::from_char(r.chars().next().unwrap()).ok())
            {
                let slot = slot.ok_or_else(|| {
                    Error::format("rotation gate requires a param slot", lineno + 1)
                })?;
                if targets.len() != 1 {
                    return Err(Error::format("rotation takes one target", lineno + 1));
                }
                circuit
                    .push_rotation(axis, targets[0], slot)
                    .map_err(map_err)?;
            } else {
                if slot.is_some() {
                    return Err(Error::format(
                        format!("gate {name} does not take a param slot"),
                        lineno + 1,
                    ));
                }
                circuit.push_standard(&name, &targets).map_err(map_err)?;
            }
        }
        Ok(circuit)
    }

    /// Render back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            let targets = op
                .targets()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let line = match op {
                CircuitOp::Fixed(g) => format!("{} {}", g.name(), targets),
                CircuitOp::Rotation { axis, slot, .. } => {
                    let name = match axis {
                        Axis::X => "RX",
                        Axis::Y => "RY",
                        Axis::Z => "RZ",
                    };
                    format!("{name} {targets} {slot}")
                }
                CircuitOp::PauliExp { letters, slot, .. } => {
                    let ls: String = letters.iter().map(|p| p.as_char()).collect();
                    format!("EXP{ls} {targets} {slot}")
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Free-function form of [`Circuit::run`].
pub fn run_circuit(circuit: &Circuit, theta: &[f64], state: &StateVector) -> Result<StateVector> {
    circuit.run(theta, state)
}
