//! Pseudo-inverse linear regression and Gaussian-process prediction.
//!
//! Both predictors reduce to a handful of inner products; they are computed
//! here with exact dense linear algebra.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::encode::EncodingSpec;
use crate::error::{Error, Result};
use crate::kernel::kernel_value;

/// Relative singular-value cutoff for the pseudo-inverse.
const SVD_REL_TOL: f64 = 1e-10;

/// Least-squares regression through the truncated SVD X = U Σ Vᵀ.
///
/// Coefficients are the minimum-norm solution β̂ = Σ_k σ_k⁻¹ v_k (u_kᵀ y);
/// singular values below 1e-10·σ_max are truncated.
#[derive(Debug, Clone)]
pub struct SvdRegression {
    singular_values: Vec<f64>,
    left_vectors: DMatrix<f64>,  // rows × K, columns u_k
    right_vectors: DMatrix<f64>, // cols × K, columns v_k
    projected: Vec<f64>,         // c_k = u_kᵀ y
    coefficients: Vec<f64>,      // β̂
}

impl SvdRegression {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn left_vectors(&self) -> &DMatrix<f64> {
        &self.left_vectors
    }

    pub fn right_vectors(&self) -> &DMatrix<f64> {
        &self.right_vectors
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

/// Fit by pseudo-inverse: β̂ = X⁺y with X⁺ = V Σ⁻¹ Uᵀ (truncated).
///
/// An all-zero X fits with rank 0 and zero coefficients; that is not an
/// error.
pub fn pinv_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<SvdRegression> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::invalid("design matrix must be nonempty"));
    }
    if y.len() != x.nrows() {
        return Err(Error::invalid(format!(
            "{} rows but {} targets",
            x.nrows(),
            y.len()
        )));
    }
    let svd = x.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = SVD_REL_TOL * sigma_max;

    let mut kept: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff && s > 0.0)
        .map(|(k, _)| k)
        .collect();
    // descending σ order
    kept.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });

    let yv = DVector::from_column_slice(y);
    let mut singular_values = Vec::with_capacity(kept.len());
    let mut projected = Vec::with_capacity(kept.len());
    let mut left = DMatrix::zeros(x.nrows(), kept.len());
    let mut right = DMatrix::zeros(x.ncols(), kept.len());
    let mut beta = DVector::zeros(x.ncols());
    for (col, &k) in kept.iter().enumerate() {
        let sigma = svd.singular_values[k];
        let uk = u.column(k);
        let vk = vt.row(k).transpose();
        let ck = uk.dot(&yv);
        beta += &vk * (ck / sigma);
        left.set_column(col, &uk);
        right.set_column(col, &vk);
        singular_values.push(sigma);
        projected.push(ck);
    }

    Ok(SvdRegression {
        singular_values,
        left_vectors: left,
        right_vectors: right,
        projected,
        coefficients: beta.iter().copied().collect(),
    })
}

/// ŷ(x) = xᵀβ̂, cross-checked against the inner-product form
/// Σ_k σ_k⁻¹ (xᵀv_k)(u_kᵀy); the two are algebraically identical and must
/// agree within 1e-10 relative to the prediction scale.
pub fn pinv_predict(model: &SvdRegression, x: &[f64]) -> Result<f64> {
    if x.len() != model.coefficients.len() {
        return Err(Error::invalid(format!(
            "expected {} features, got {}",
            model.coefficients.len(),
            x.len()
        )));
    }
    let direct: f64 = x.iter().zip(&model.coefficients).map(|(a, b)| a * b).sum();
    let xv = DVector::from_column_slice(x);
    let mut inner_form = 0.0;
    for k in 0..model.rank() {
        let xv_k = model.right_vectors.column(k).dot(&xv);
        inner_form += xv_k * model.projected[k] / model.singular_values[k];
    }
    let scale = direct.abs().max(inner_form.abs()).max(1.0);
    if (direct - inner_form).abs() > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "prediction routes disagree: xᵀβ̂ = {direct}, inner-product form = {inner_form}"
        )));
    }
    Ok(direct)
}

/// Kernel choice for Gaussian-process regression.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum GpKernel {
    /// Quantum kernel induced by a data encoding.
    Encoding(EncodingSpec),
    /// Classical RBF baseline exp(−‖x−x′‖² / (2w²)).
    Rbf { bandwidth: f64 },
}

impl GpKernel {
    pub fn value(&self, x: &[f64], x2: &[f64]) -> Result<f64> {
        match self {
            GpKernel::Encoding(spec) => kernel_value(x, x2, spec),
            GpKernel::Rbf { bandwidth } => {
                if *bandwidth <= 0.0 {
                    return Err(Error::invalid("RBF bandwidth must be > 0"));
                }
                let d2: f64 = x.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
                Ok((-d2 / (2.0 * bandwidth * bandwidth)).exp())
            }
        }
    }
}

/// A fitted Gaussian process: kernel, training data, noise level, and the
/// cached solve of (K + σ²I)·w = y.
pub struct GpModel {
    train_inputs: Vec<Vec<f64>>,
    kernel: GpKernel,
    noise: f64,
    weights: DVector<f64>,
    factor: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    jitter: f64,
}

impl GpModel {
    pub fn weights(&self) -> &[f64] {
        self.weights.as_slice()
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Jitter that had to be added for the factorization to succeed.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }
}

/// Factorize K + σ²I (escalating jitter from 1e-12 up to 1e-6 when needed)
/// and cache the solved weights.
pub fn gp_fit(inputs: &[Vec<f64>], y: &[f64], kernel: GpKernel, noise: f64) -> Result<GpModel> {
    if inputs.is_empty() || inputs.len() != y.len() {
        return Err(Error::invalid(
            "gp_fit needs equally many inputs and targets, at least one each",
        ));
    }
    if noise < 0.0 || !noise.is_finite() {
        return Err(Error::invalid("noise variance must be finite and ≥ 0"));
    }
    let n = inputs.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.value(&inputs[i], &inputs[j])?;
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    for i in 0..n {
        k[(i, i)] += noise;
    }

    let mut jitter = 0.0;
    let mut candidate = 1e-12;
    let factor = loop {
        let mut kj = k.clone();
        for i in 0..n {
            kj[(i, i)] += jitter;
        }
        match kj.cholesky() {
            Some(f) => break f,
            None => {
                if candidate > 1e-6 {
                    return Err(Error::IllConditioned(format!(
                        "K + σ²I not positive definite even with jitter 1e-6 (n = {n})"
                    )));
                }
                jitter = candidate;
                candidate *= 10.0;
            }
        }
    };
    let weights = factor.solve(&DVector::from_column_slice(y));
    Ok(GpModel {
        train_inputs: inputs.to_vec(),
        kernel,
        noise,
        weights,
        factor,
        jitter,
    })
}

/// Predictive mean and variance at a test point:
/// mean = k*ᵀ(K+σ²I)⁻¹y, variance = k** − k*ᵀ(K+σ²I)⁻¹k*.
///
/// Tiny negative variances (≥ −1e-9) clamp to zero; anything more negative
/// is a numerical failure.
pub fn gp_predict(model: &GpModel, x_star: &[f64]) -> Result<(f64, f64)> {
    let n = model.train_inputs.len();
    let mut k_star = DVector::zeros(n);
    for (i, xi) in model.train_inputs.iter().enumerate() {
        k_star[i] = model.kernel.value(xi, x_star)?;
    }
    let k_star_star = model.kernel.value(x_star, x_star)?;
    let mean = k_star.dot(&model.weights);
    let solved = model.factor.solve(&k_star);
    let variance = k_star_star - k_star.dot(&solved);
    if variance < -1e-9 {
        return Err(Error::Numerical(format!(
            "negative predictive variance {variance}"
        )));
    }
    Ok((mean, variance.max(0.0)))
}
