//! Quantum kernels, Gram matrices, kernel ridge regression and the
//! measurement-operator expansion of kernel models.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::state::DensityMatrix;
use crate::encode::{feature_density, EncodingSpec};
use crate::error::{Error, Result};

/// Dual-route verification cap: above this state dimension the density
/// matrices for the trace route are too large to materialize.
const DUAL_CHECK_MAX_DIM: usize = 1 << 10;

/// k(x, x′) = tr(ρ(x′)ρ(x)) = |⟨φ(x′)|φ(x)⟩|².
///
/// Both routes are evaluated and must agree within 1e-10 (the trace route
/// is skipped above 10 qubits, where the density matrices stop being desk
/// scale). The result lies in [0, 1] for pure-state encodings.
pub fn kernel_value(x: &[f64], x2: &[f64], spec: &EncodingSpec) -> Result<f64> {
    let phi = spec.encode(x)?;
    let phi2 = spec.encode(x2)?;
    let overlap = phi2.inner(&phi)?.norm_sqr();
    if phi.dim() <= DUAL_CHECK_MAX_DIM {
        let trace = DensityMatrix::from_pure(&phi).product_trace(&DensityMatrix::from_pure(&phi2))?;
        if (trace - overlap).abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "kernel duality violated: tr(ρρ′) = {trace}, |⟨φ′|φ⟩|² = {overlap}"
            )));
        }
    }
    Ok(overlap.clamp(0.0, 1.0))
}

/// Symmetric M×M kernel matrix over a sample list.
pub fn gram_matrix(xs: &[Vec<f64>], spec: &EncodingSpec) -> Result<DMatrix<f64>> {
    if xs.is_empty() {
        return Err(Error::invalid("gram_matrix needs at least one sample"));
    }
    let m = xs.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i..m).map(move |j| (i, j)))
        .collect();
    let values: Vec<((usize, usize), f64)> = pairs
        .par_iter()
        .map(|&(i, j)| kernel_value(&xs[i], &xs[j], spec).map(|v| ((i, j), v)))
        .collect::<Result<_>>()?;
    let mut k = DMatrix::zeros(m, m);
    for ((i, j), v) in values {
        k[(i, j)] = v;
        k[(j, i)] = v;
    }
    Ok(k)
}

/// A representer-theorem model f(x) = Σ_m α_m k(x^m, x).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelModel {
    pub support_inputs: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub encoding: EncodingSpec,
    pub ridge: f64,
}

impl KernelModel {
    /// Serialize to JSON. `f64` values round-trip bit-exactly.
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let model: KernelModel = serde_json::from_str(&fs::read_to_string(path)?)?;
        if model.coefficients.len() != model.support_inputs.len() {
            return Err(Error::invalid(
                "model file has mismatched coefficient and support counts",
            ));
        }
        Ok(model)
    }
}

/// Fit kernel ridge regression by the closed form α = (K + γ·M·I)^{-1} y,
/// the exact minimizer of (1/M) Σ (y^m − f(x^m))² + γ‖f‖².
///
/// With `gamma = 0` the Gram matrix must be invertible.
pub fn krr_fit(
    xs: &[Vec<f64>],
    ys: &[f64],
    spec: &EncodingSpec,
    gamma: f64,
) -> Result<KernelModel> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::invalid(
            "krr_fit needs equally many inputs and labels, at least one each",
        ));
    }
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::invalid("ridge weight must be finite and ≥ 0"));
    }
    let m = xs.len();
    let mut k = gram_matrix(xs, spec)?;
    for i in 0..m {
        k[(i, i)] += gamma * m as f64;
    }
    let y = DVector::from_column_slice(ys);
    let alpha = k
        .lu()
        .solve(&y)
        .ok_or_else(|| Error::SingularMatrix("Gram matrix is singular at gamma = 0".into()))?;
    Ok(KernelModel {
        support_inputs: xs.to_vec(),
        coefficients: alpha.iter().copied().collect(),
        encoding: *spec,
        ridge: gamma,
    })
}

/// f(x) = Σ_m α_m k(x^m, x).
pub fn krr_predict(model: &KernelModel, x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (xm, &am) in model.support_inputs.iter().zip(&model.coefficients) {
        acc += am * kernel_value(xm, x, &model.encoding)?;
    }
    Ok(acc)
}

/// A measurement operator written as M = Σ_k γ_k ρ(x^k).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementExpansion {
    pub anchors: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub encoding: EncodingSpec,
}

impl MeasurementExpansion {
    /// tr(ρ(x)·M) = Σ_k γ_k k(x^k, x).
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (xk, &gk) in self.anchors.iter().zip(&self.weights) {
            acc += gk * kernel_value(xk, x, &self.encoding)?;
        }
        Ok(acc)
    }

    /// Materialize M = Σ_k γ_k ρ(x^k) as a density-space operator (not
    /// itself a density matrix). Desk scale only.
    pub fn operator(&self) -> Result<DMatrix<num_complex::Complex64>> {
        let dim = 1usize << self.encoding.num_qubits();
        let mut op = DMatrix::zeros(dim, dim);
        for (xk, &gk) in self.anchors.iter().zip(&self.weights) {
            let rho = feature_density(xk, &self.encoding)?;
            op += rho.entries() * num_complex::Complex64::new(gk, 0.0);
        }
        Ok(op)
    }
}

/// Fit the optimal measurement by least squares over vectorized feature
/// matrices: the weights are γ = K⁺y with K the anchor Gram matrix and the
/// pseudo-inverse truncating singular values below 1e-10·σ_max. Predictions
/// tr(ρ(x)·M) agree with the kernel expansion Σ_k γ_k k(x^k, x).
pub fn fit_measurement(
    xs: &[Vec<f64>],
    ys: &[f64],
    spec: &EncodingSpec,
) -> Result<MeasurementExpansion> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::invalid(
            "fit_measurement needs equally many inputs and labels, at least one each",
        ));
    }
    let k = gram_matrix(xs, spec)?;
    let pinv = pseudo_inverse(&k, 1e-10);
    let weights = &pinv * DVector::from_column_slice(ys);
    Ok(MeasurementExpansion {
        anchors: xs.to_vec(),
        weights: weights.iter().copied().collect(),
        encoding: *spec,
    })
}

/// Moore–Penrose pseudo-inverse with singular values below
/// `rel_tol · σ_max` truncated to zero.
pub fn pseudo_inverse(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * sigma_max;
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let mut sigma_inv = DMatrix::zeros(vt.nrows(), u.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            sigma_inv[(i, i)] = 1.0 / s;
        }
    }
    vt.transpose() * sigma_inv * u.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::EncodingKind;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn amplitude2() -> EncodingSpec {
        EncodingSpec::amplitude(2).unwrap()
    }

    #[test]
    fn self_kernel_is_one() {
        let spec = amplitude2();
        let v = kernel_value(&[0.3, -1.2], &[0.3, -1.2], &spec).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn amplitude_kernel_half() {
        let spec = amplitude2();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = kernel_value(&[1.0, 0.0], &[r, r], &spec).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn basis_kernel_is_kronecker() {
        let spec = EncodingSpec::basis(3).unwrap();
        let a = vec![1.0, 0.0, 1.0];
        let b = vec![0.0, 0.0, 1.0];
        assert_abs_diff_eq!(kernel_value(&a, &a, &spec).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(kernel_value(&a, &b, &spec).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn angle_kernel_closed_form() {
        // one feature: k(x, x′) = cos²((x − x′)/2)
        let spec = EncodingSpec::angle(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = rng.gen_range(-3.0..3.0);
            let y = rng.gen_range(-3.0..3.0);
            let v = kernel_value(&[x], &[y], &spec).unwrap();
            let expect = ((x - y) / 2.0).cos().powi(2);
            assert_abs_diff_eq!(v, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn kernel_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [EncodingKind::Amplitude, EncodingKind::Angle] {
            let spec = EncodingSpec::new(kind, 3).unwrap();
            for _ in 0..10 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let a = kernel_value(&x, &y, &spec).unwrap();
                let b = kernel_value(&y, &x, &spec).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_sample_gram() {
        let spec = amplitude2();
        let k = gram_matrix(&[vec![2.0, 1.0]], &spec).unwrap();
        assert_eq!(k.nrows(), 1);
        assert_abs_diff_eq!(k[(0, 0)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_basis_inputs_give_identity_gram() {
        let spec = EncodingSpec::basis(2).unwrap();
        let xs = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let k = gram_matrix(&xs, &spec).unwrap();
        assert!((k - DMatrix::<f64>::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn random_gram_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = EncodingSpec::amplitude(4).unwrap();
        let xs: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let k = gram_matrix(&xs, &spec).unwrap();
        let eig = k.symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-9, "min eigenvalue {min}");
    }

    #[test]
    fn krr_identity_gram_cases() {
        let spec = EncodingSpec::basis(2).unwrap();
        let xs = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        // K = I, γ = 0 → α = y
        let m = krr_fit(&xs, &[2.0, -1.0], &spec, 0.0).unwrap();
        assert_abs_diff_eq!(m.coefficients[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.coefficients[1], -1.0, epsilon = 1e-12);
        // K = I, γ = 1, M = 2 → (I + 2I)α = y
        let m = krr_fit(&xs, &[1.0, -1.0], &spec, 1.0).unwrap();
        assert_abs_diff_eq!(m.coefficients[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.coefficients[1], -1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn krr_interpolates_at_gamma_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = EncodingSpec::amplitude(3).unwrap();
        let xs: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let ys: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let model = krr_fit(&xs, &ys, &spec, 0.0).unwrap();
        for (x, &y) in xs.iter().zip(&ys) {
            assert_abs_diff_eq!(krr_predict(&model, x).unwrap(), y, epsilon = 1e-8);
        }
    }

    #[test]
    fn krr_gamma_zero_rejects_singular_gram() {
        let spec = amplitude2();
        // identical inputs → rank-1 Gram
        let xs = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        match krr_fit(&xs, &[1.0, 1.0], &spec, 0.0) {
            Err(Error::SingularMatrix(_)) => {}
            other => panic!("expected singular-matrix error, got {other:?}"),
        }
    }

    #[test]
    fn krr_single_support_prediction() {
        let spec = amplitude2();
        let xs = vec![vec![0.6, 0.8]];
        let model = krr_fit(&xs, &[3.5], &spec, 0.0).unwrap();
        assert_abs_diff_eq!(krr_predict(&model, &[0.6, 0.8]).unwrap(), 3.5, epsilon = 1e-10);
        // orthogonal input → 0
        let spec_b = EncodingSpec::basis(2).unwrap();
        let model_b = krr_fit(&[vec![1.0, 0.0]], &[2.0], &spec_b, 0.0).unwrap();
        assert_abs_diff_eq!(krr_predict(&model_b, &[0.0, 1.0]).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn measurement_expansion_matches_kernel_form_and_operator_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = EncodingSpec::amplitude(4).unwrap();
        let xs: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let ys: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let exp = fit_measurement(&xs, &ys, &spec).unwrap();
        let op = exp.operator().unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let via_kernel = exp.predict(&x).unwrap();
            let rho = feature_density(&x, &spec).unwrap();
            let via_trace: f64 = (rho.entries() * &op).diagonal().iter().map(|e| e.re).sum();
            assert_abs_diff_eq!(via_kernel, via_trace, epsilon = 1e-9);
        }
    }

    #[test]
    fn measurement_single_anchor_weight() {
        let spec = amplitude2();
        let exp = fit_measurement(&[vec![1.0, 2.0]], &[4.25], &spec).unwrap();
        assert_abs_diff_eq!(exp.weights[0], 4.25, epsilon = 1e-10);
    }

    #[test]
    fn duplicated_anchors_do_not_change_predictions() {
        let spec = EncodingSpec::amplitude(3).unwrap();
        let xs = vec![vec![1.0, 0.0, 0.5], vec![0.2, -1.0, 0.7]];
        let ys = vec![1.0, -1.0];
        let dup_xs = vec![xs[0].clone(), xs[0].clone(), xs[1].clone()];
        let dup_ys = vec![1.0, 1.0, -1.0];
        let a = fit_measurement(&xs, &ys, &spec).unwrap();
        let b = fit_measurement(&dup_xs, &dup_ys, &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert_abs_diff_eq!(a.predict(&x).unwrap(), b.predict(&x).unwrap(), epsilon = 1e-8);
        }
    }

    #[test]
    fn krr_prediction_equals_measurement_contraction() {
        // f(x) from the fitted kernel model equals tr(ρ(x)·M_exp) when the
        // expansion reuses the KRR coefficients
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec = EncodingSpec::amplitude(4).unwrap();
        let xs: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let ys: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let model = krr_fit(&xs, &ys, &spec, 0.1).unwrap();
        let exp = MeasurementExpansion {
            anchors: model.support_inputs.clone(),
            weights: model.coefficients.clone(),
            encoding: spec,
        };
        let op = exp.operator().unwrap();
        for _ in 0..5 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = krr_predict(&model, &x).unwrap();
            let rho = feature_density(&x, &spec).unwrap();
            let tr: f64 = (rho.entries() * &op).diagonal().iter().map(|e| e.re).sum();
            assert_abs_diff_eq!(f, tr, epsilon = 1e-10);
        }
    }

    #[test]
    fn model_json_round_trip_is_bit_faithful() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = KernelModel {
            support_inputs: vec![vec![0.1 + 0.2, std::f64::consts::PI], vec![1e-307, -0.0]],
            coefficients: vec![1.0 / 3.0, -std::f64::consts::E],
            encoding: EncodingSpec::amplitude(2).unwrap(),
            ridge: 0.017,
        };
        model.save(&path).unwrap();
        let back = KernelModel::load(&path).unwrap();
        for (a, b) in model.coefficients.iter().zip(&back.coefficients) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (xa, xb) in model.support_inputs.iter().zip(&back.support_inputs) {
            for (a, b) in xa.iter().zip(xb) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        assert_eq!(model.ridge.to_bits(), back.ridge.to_bits());
    }
}
