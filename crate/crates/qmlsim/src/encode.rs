//! Data-encoding feature maps: classical vectors into quantum states and
//! rank-1 feature density matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::core::gate::{apply, rotation_gate, Axis};
use crate::core::state::{DensityMatrix, StateVector};
use crate::error::{Error, Result};

/// Which feature map to use and how many classical features it expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub kind: EncodingKind,
    pub num_features: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    /// Bit vector → computational basis state (one qubit per feature).
    Basis,
    /// Real vector → normalized amplitudes, zero-padded to a power of two.
    Amplitude,
    /// Real vector → product of R_x(x_j)|0⟩ rotations (one qubit per feature).
    Angle,
}

impl EncodingSpec {
    pub fn new(kind: EncodingKind, num_features: usize) -> Result<Self> {
        if num_features == 0 {
            return Err(Error::invalid("encoding needs at least one feature"));
        }
        Ok(EncodingSpec { kind, num_features })
    }

    pub fn basis(num_features: usize) -> Result<Self> {
        Self::new(EncodingKind::Basis, num_features)
    }

    pub fn amplitude(num_features: usize) -> Result<Self> {
        Self::new(EncodingKind::Amplitude, num_features)
    }

    pub fn angle(num_features: usize) -> Result<Self> {
        Self::new(EncodingKind::Angle, num_features)
    }

    /// Number of qubits the encoded states occupy.
    pub fn num_qubits(&self) -> usize {
        match self.kind {
            EncodingKind::Basis | EncodingKind::Angle => self.num_features,
            EncodingKind::Amplitude => padded_len(self.num_features).trailing_zeros() as usize,
        }
    }

    /// Encode one input with the configured feature map.
    pub fn encode(&self, x: &[f64]) -> Result<StateVector> {
        if x.len() != self.num_features {
            return Err(Error::invalid(format!(
                "expected {} features, got {}",
                self.num_features,
                x.len()
            )));
        }
        match self.kind {
            EncodingKind::Basis => {
                let bits: Vec<u8> = x
                    .iter()
                    .map(|&v| {
                        if v == 0.0 {
                            Ok(0u8)
                        } else if v == 1.0 {
                            Ok(1u8)
                        } else {
                            Err(Error::invalid(format!(
                                "basis encoding needs binary features, got {v}"
                            )))
                        }
                    })
                    .collect::<Result<_>>()?;
                encode_basis(&bits)
            }
            EncodingKind::Amplitude => encode_amplitude(x),
            EncodingKind::Angle => encode_angle(x),
        }
    }
}

fn padded_len(n: usize) -> usize {
    n.max(2).next_power_of_two()
}

/// Bit vector → basis state at index i_x = Σ_k 2^k x_k.
pub fn encode_basis(x: &[u8]) -> Result<StateVector> {
    StateVector::basis(x.len(), x)
}

/// Real vector → unit-norm amplitudes, zero-padded to the next power of two
/// (at least 2). Rejects the zero vector.
pub fn encode_amplitude(x: &[f64]) -> Result<StateVector> {
    if x.is_empty() {
        return Err(Error::invalid("amplitude encoding needs at least one entry"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("amplitude encoding needs finite entries"));
    }
    let mut amplitudes: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    amplitudes.resize(padded_len(x.len()), Complex64::new(0.0, 0.0));
    StateVector::normalized(amplitudes)
        .map_err(|_| Error::invalid("cannot amplitude-encode the zero vector"))
}

/// Real vector → n-qubit product state R_x(x_1)⊗…⊗R_x(x_n)|0…0⟩.
pub fn encode_angle(x: &[f64]) -> Result<StateVector> {
    if x.is_empty() {
        return Err(Error::invalid("angle encoding needs at least one entry"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("angle encoding needs finite entries"));
    }
    let mut state = StateVector::basis(x.len(), &vec![0u8; x.len()])?;
    for (j, &xj) in x.iter().enumerate() {
        state = apply(&state, &rotation_gate(Axis::X, xj, j)?)?;
    }
    Ok(state)
}

/// ρ(x) = |φ(x)⟩⟨φ(x)| for the chosen encoding.
pub fn feature_density(x: &[f64], spec: &EncodingSpec) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_pure(&spec.encode(x)?))
}

/// Load a numeric CSV dataset: one sample per row, the last column is the
/// label/target, everything before it is the feature vector. Blank lines
/// and `#` comments are skipped; a non-numeric first data row is treated as
/// a header.
pub fn load_csv_dataset(path: &std::path::Path) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut ys = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let row = match fields {
            Ok(row) => row,
            Err(_) if xs.is_empty() && ys.is_empty() => continue, // header row
            Err(_) => {
                return Err(Error::Format {
                    msg: format!("non-numeric field in '{line}'"),
                    offset: lineno + 1,
                })
            }
        };
        if row.len() < 2 {
            return Err(Error::Format {
                msg: "each row needs at least one feature and a label".into(),
                offset: lineno + 1,
            });
        }
        if let Some(prev) = xs.first() {
            if row.len() != prev.len() + 1 {
                return Err(Error::Format {
                    msg: format!("row has {} fields, expected {}", row.len(), prev.len() + 1),
                    offset: lineno + 1,
                });
            }
        }
        let (features, label) = row.split_at(row.len() - 1);
        xs.push(features.to_vec());
        ys.push(label[0]);
    }
    if xs.is_empty() {
        return Err(Error::Format {
            msg: "dataset is empty".into(),
            offset: 0,
        });
    }
    Ok((xs, ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn basis_encoding_indexing() {
        let s = encode_basis(&[0, 0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        // [1,0,1] → 1 + 4 = 5
        let s = encode_basis(&[1, 0, 1]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[5].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn distinct_basis_inputs_are_orthogonal() {
        let a = encode_basis(&[1, 0, 1]).unwrap();
        let b = encode_basis(&[1, 1, 0]).unwrap();
        assert_abs_diff_eq!(a.inner(&b).unwrap().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn basis_spec_rejects_non_binary() {
        let spec = EncodingSpec::basis(2).unwrap();
        assert!(spec.encode(&[0.0, 0.5]).is_err());
        assert!(spec.encode(&[0.0, 1.0]).is_ok());
    }

    #[test]
    fn amplitude_encoding_normalizes() {
        let s = encode_amplitude(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        let s = encode_amplitude(&[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn amplitude_encoding_pads_to_power_of_two() {
        let s = encode_amplitude(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.dim(), 4);
        let r = 1.0 / 3f64.sqrt();
        for i in 0..3 {
            assert_abs_diff_eq!(s.amplitudes()[i].re, r, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(s.amplitudes()[3].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn amplitude_encoding_rejects_zero_vector() {
        assert!(encode_amplitude(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn angle_encoding_at_zero_is_ground_state() {
        let s = encode_angle(&[0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn angle_encoding_pi_gives_minus_i_one() {
        let s = encode_angle(&[PI]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[1].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn angle_encoding_is_a_product_state() {
        // single-qubit reduced purity = 1 on both qubits
        let s = encode_angle(&[0.9, -1.7]).unwrap();
        let a = s.amplitudes();
        // reduced density of qubit 0: rows/cols over bit 0, traced over bit 1
        let mut red = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    red[i][j] += a[i + 2 * k] * a[j + 2 * k].conj();
                }
            }
        }
        let purity: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (red[i][j] * red[j][i]).re)
            .sum();
        assert_abs_diff_eq!(purity, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn angle_encoding_symmetric_under_qubit_swap() {
        let s = encode_angle(&[0.42, 0.42]).unwrap();
        let a = s.amplitudes();
        assert!((a[1] - a[2]).norm() < 1e-14, "identical angles → symmetric amplitudes");
    }

    #[test]
    fn basis_encoding_matches_init_basis_state() {
        let bits = [1u8, 1, 0, 1];
        let a = encode_basis(&bits).unwrap();
        let b = crate::core::init_basis_state(4, &bits).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn all_encoders_emit_unit_norm() {
        let specs = [
            (EncodingSpec::basis(3).unwrap(), vec![1.0, 0.0, 1.0]),
            (EncodingSpec::amplitude(3).unwrap(), vec![0.2, -0.4, 1.7]),
            (EncodingSpec::angle(3).unwrap(), vec![0.3, 2.2, -0.9]),
        ];
        for (spec, x) in &specs {
            let s = spec.encode(x).unwrap();
            assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
            assert_eq!(s.num_qubits(), spec.num_qubits());
        }
    }

    #[test]
    fn csv_loader_reads_features_and_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        std::fs::write(&path, "# comment\nx1,x2,label\n1.0,0.0,1\n0.5,-0.25,-1\n\n").unwrap();
        let (xs, ys) = load_csv_dataset(&path).unwrap();
        assert_eq!(xs, vec![vec![1.0, 0.0], vec![0.5, -0.25]]);
        assert_eq!(ys, vec![1.0, -1.0]);

        std::fs::write(&path, "1.0,2.0,3.0\n1.0,2.0\n").unwrap();
        match load_csv_dataset(&path) {
            Err(crate::error::Error::Format { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected format error, got {other:?}"),
        }
        std::fs::write(&path, "").unwrap();
        assert!(load_csv_dataset(&path).is_err());
    }

    #[test]
    fn feature_densities_are_rank_one() {
        let spec = EncodingSpec::basis(1).unwrap();
        let rho = feature_density(&[1.0], &spec).unwrap();
        assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 1.0, epsilon = 1e-15);

        let spec = EncodingSpec::amplitude(2).unwrap();
        let rho = feature_density(&[1.0, 1.0], &spec).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(rho.entries()[(i, j)].re, 0.5, epsilon = 1e-12);
            }
        }

        let spec = EncodingSpec::angle(2).unwrap();
        let rho = feature_density(&[1.3, -0.2], &spec).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
    }
}
