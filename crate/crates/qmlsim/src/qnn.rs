//! Variational quantum classifier: a layered circuit of Pauli-string
//! exponentials U(θ) = U_L(θ_L)…U_1(θ_1) acting on data qubits plus one
//! readout qubit, scored by the readout Pauli-Y expectation.
//!
//! Gradients come three ways: exact statevector contraction, central finite
//! differences, and a simulated auxiliary-qubit interference protocol whose
//! outcome frequencies estimate the imaginary part of ⟨z,1|𝒰(θ)|z,1⟩.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::gate::{apply_exp_pauli, apply_pauli};
use crate::core::pauli::{Pauli, PauliString};
use crate::core::state::{kahan_sum, StateVector};
use crate::error::{Error, Result};

/// A layered variational classifier on n data qubits plus a readout qubit
/// at index n. Layer k applies exp(iθ_k·Σ_k); every generator touches at
/// most two qubits, one of which is the readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnnModel {
    data_qubits: usize,
    layers: Vec<PauliString>,
    theta: Vec<f64>,
}

impl QnnModel {
    /// Build a model with all parameters at zero.
    pub fn new(data_qubits: usize, layers: Vec<PauliString>) -> Result<Self> {
        if data_qubits == 0 {
            return Err(Error::invalid("need at least one data qubit"));
        }
        let width = data_qubits + 1;
        let readout = data_qubits;
        for (k, sigma) in layers.iter().enumerate() {
            if sigma.num_qubits() != width {
                return Err(Error::invalid(format!(
                    "layer {k} acts on {} qubits, expected {width}",
                    sigma.num_qubits()
                )));
            }
            let support = sigma.support();
            if support.len() > 2 {
                return Err(Error::invalid(format!(
                    "layer {k} touches {} qubits; generators are limited to 2",
                    support.len()
                )));
            }
            if !support.contains(&readout) {
                return Err(Error::invalid(format!(
                    "layer {k} does not touch the readout qubit {readout}"
                )));
            }
        }
        let theta = vec![0.0; layers.len()];
        Ok(QnnModel {
            data_qubits,
            layers,
            theta,
        })
    }

    /// The default two-sweep layout: one sweep of X_j⊗Y_readout over all
    /// data qubits, then one sweep of Z_j⊗X_readout, each generator with
    /// its own parameter.
    ///
    /// With the |z,1⟩ preparation and the Y readout, generators whose X/Y
    /// letter count is even (XX, ZZ, …) conjugate Y_readout into operators
    /// that keep an X or Y letter on every reachable term, so the model
    /// output is identically zero on basis-state inputs. The XY/ZX pair is
    /// the standard XX/ZZ image-classification layer conjugated into this
    /// preparation/measurement frame, and trains.
    pub fn two_sweep(data_qubits: usize) -> Result<Self> {
        Self::with_sweeps(data_qubits, &[(Pauli::X, Pauli::Y), (Pauli::Z, Pauli::X)])
    }

    /// Generalized sweep layout: for each (data letter, readout letter)
    /// pair, one two-qubit generator per data qubit.
    pub fn with_sweeps(data_qubits: usize, sweeps: &[(Pauli, Pauli)]) -> Result<Self> {
        let width = data_qubits + 1;
        let readout = data_qubits;
        let mut layers = Vec::with_capacity(sweeps.len() * data_qubits);
        for &(data_p, readout_p) in sweeps {
            for j in 0..data_qubits {
                layers.push(PauliString::two(width, (j, data_p), (readout, readout_p))?);
            }
        }
        Self::new(data_qubits, layers)
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn readout_qubit(&self) -> usize {
        self.data_qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.data_qubits + 1
    }

    pub fn num_params(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[PauliString] {
        &self.layers
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn set_theta(&mut self, theta: Vec<f64>) -> Result<()> {
        if theta.len() != self.layers.len() {
            return Err(Error::invalid(format!(
                "expected {} parameters, got {}",
                self.layers.len(),
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("parameters must be finite"));
        }
        self.theta = theta;
        Ok(())
    }

    /// |z, 1⟩: data qubit j is |1⟩ iff z_j = +1, readout starts in |1⟩.
    pub fn prepare_input(&self, z: &[i8]) -> Result<StateVector> {
        if z.len() != self.data_qubits {
            return Err(Error::invalid(format!(
                "expected {} inputs, got {}",
                self.data_qubits,
                z.len()
            )));
        }
        let mut bits = Vec::with_capacity(self.num_qubits());
        for &v in z {
            match v {
                1 => bits.push(1),
                -1 => bits.push(0),
                other => {
                    return Err(Error::invalid(format!(
                        "inputs must be ±1, got {other}"
                    )))
                }
            }
        }
        bits.push(1); // readout
        StateVector::basis(self.num_qubits(), &bits)
    }

    /// Y on the readout qubit, identity elsewhere.
    pub fn readout_observable(&self) -> PauliString {
        PauliString::single(self.num_qubits(), self.readout_qubit(), Pauli::Y)
            .expect("readout index is always in range")
    }

    /// U(θ)|ψ⟩ with layer 1 applied first.
    fn run(&self, state: &StateVector) -> Result<StateVector> {
        let mut s = state.clone();
        for (sigma, &theta) in self.layers.iter().zip(&self.theta) {
            s = apply_exp_pauli(&s, theta, sigma)?;
        }
        Ok(s)
    }

    /// Save as JSON (layers as Pauli letter strings plus θ).
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw: QnnModel = serde_json::from_str(&fs::read_to_string(path)?)?;
        let mut model = QnnModel::new(raw.data_qubits, raw.layers)?;
        model.set_theta(raw.theta)?;
        Ok(model)
    }
}

fn check_label(label: i8) -> Result<f64> {
    match label {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        other => Err(Error::invalid(format!("label must be ±1, got {other}"))),
    }
}

/// ⟨z,1| U†(θ) Y_readout U(θ) |z,1⟩ ∈ [−1, 1].
pub fn qnn_forward(model: &QnnModel, z: &[i8]) -> Result<f64> {
    let state = model.run(&model.prepare_input(z)?)?;
    crate::core::measure::expectation(&state, &model.readout_observable())
}

/// loss(θ, z) = 1 − l(z)·⟨z,1|U†YU|z,1⟩ ∈ [0, 2].
pub fn qnn_loss(model: &QnnModel, z: &[i8], label: i8) -> Result<f64> {
    let l = check_label(label)?;
    Ok(1.0 - l * qnn_forward(model, z)?)
}

/// Classify by the sign of the forward expectation; an exact zero counts
/// as +1.
pub fn qnn_predict(model: &QnnModel, z: &[i8]) -> Result<i8> {
    Ok(if qnn_forward(model, z)? < 0.0 { -1 } else { 1 })
}

/// Exact gradient of the loss by statevector contraction.
///
/// For each layer, dloss/dθ_k = 2·l(z)·Im ⟨z,1| U_1†…U_L† Y U_L…U_{k+1}
/// Σ_k U_k…U_1 |z,1⟩; the whole vector is computed in one backward sweep
/// (two state pullbacks per layer). Every component is bounded by 2.
pub fn qnn_grad_analytic(model: &QnnModel, z: &[i8], label: i8) -> Result<Vec<f64>> {
    let l = check_label(label)?;
    let layer_count = model.layers.len();
    if layer_count == 0 {
        return Ok(Vec::new());
    }
    let psi = model.prepare_input(z)?;
    // α = U_k…U_1|ψ⟩, β = (U_L…U_{k+1})† Y U|ψ⟩, both swept downwards
    let mut alpha = model.run(&psi)?;
    let mut beta = apply_pauli(&alpha, &model.readout_observable())?;
    let mut grad = vec![0.0; layer_count];
    for k in (0..layer_count).rev() {
        let sigma_alpha = apply_pauli(&alpha, &model.layers[k])?;
        let m = beta.inner(&sigma_alpha)?;
        grad[k] = 2.0 * l * m.im;
        if k > 0 {
            alpha = apply_exp_pauli(&alpha, -model.theta[k], &model.layers[k])?;
            beta = apply_exp_pauli(&beta, -model.theta[k], &model.layers[k])?;
        }
    }
    Ok(grad)
}

/// Central-difference gradient of the loss:
/// (loss(θ_k+ε) − loss(θ_k−ε)) / (2ε) per component.
pub fn qnn_grad_fd(model: &QnnModel, z: &[i8], label: i8, epsilon: f64) -> Result<Vec<f64>> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be finite and > 0"));
    }
    check_label(label)?;
    let mut grad = Vec::with_capacity(model.layers.len());
    let mut shifted = model.clone();
    for k in 0..model.layers.len() {
        shifted.theta[k] = model.theta[k] + epsilon;
        let plus = qnn_loss(&shifted, z, label)?;
        shifted.theta[k] = model.theta[k] - epsilon;
        let minus = qnn_loss(&shifted, z, label)?;
        shifted.theta[k] = model.theta[k];
        grad.push((plus - minus) / (2.0 * epsilon));
    }
    Ok(grad)
}

/// 𝒰(θ) for layer k: the 2L+2-unitary chain
/// U_1†…U_L† · Y · U_L…U_{k+1} · Σ_k · U_k…U_1 applied to a state.
fn gradient_chain(model: &QnnModel, k: usize, v: &StateVector) -> Result<StateVector> {
    let mut s = v.clone();
    for i in 0..=k {
        s = apply_exp_pauli(&s, model.theta[i], &model.layers[i])?;
    }
    s = apply_pauli(&s, &model.layers[k])?;
    for i in k + 1..model.layers.len() {
        s = apply_exp_pauli(&s, model.theta[i], &model.layers[i])?;
    }
    s = apply_pauli(&s, &model.readout_observable())?;
    for i in (0..model.layers.len()).rev() {
        s = apply_exp_pauli(&s, -model.theta[i], &model.layers[i])?;
    }
    Ok(s)
}

/// Exact probability of measuring the auxiliary qubit in |0⟩ for the
/// interference protocol: prepare |ψ⟩ ⊗ (|0⟩+|1⟩)/√2, apply i·𝒰 conditioned
/// on the auxiliary, Hadamard the auxiliary, measure. Equals
/// 1/2 − Im⟨ψ|𝒰|ψ⟩/2.
pub fn hadamard_test_p0(
    psi: &StateVector,
    u: impl FnOnce(&StateVector) -> Result<StateVector>,
) -> Result<f64> {
    let u_psi = u(psi)?;
    if u_psi.dim() != psi.dim() {
        return Err(Error::invalid("protocol unitary changed the register size"));
    }
    // after the conditional: (|ψ⟩|0⟩ + i𝒰|ψ⟩|1⟩)/√2
    // after H on the auxiliary, the |0⟩ block is (|ψ⟩ + i𝒰|ψ⟩)/2
    let i_unit = num_complex::Complex64::new(0.0, 1.0);
    let p0 = kahan_sum(
        psi.amplitudes()
            .iter()
            .zip(u_psi.amplitudes())
            .map(|(a, b)| (a + i_unit * b).norm_sqr() / 4.0),
    );
    Ok(p0.clamp(0.0, 1.0))
}

/// Shot-based estimate of one gradient component via the auxiliary-qubit
/// protocol on 𝒰(θ) for layer `k`.
///
/// The estimator is unbiased for 2·l(z)·Im⟨z,1|𝒰|z,1⟩; the Im estimate has
/// standard error ≤ 1/√shots.
pub fn hadamard_test_grad(
    model: &QnnModel,
    z: &[i8],
    label: i8,
    k: usize,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let l = check_label(label)?;
    if k >= model.layers.len() {
        return Err(Error::invalid(format!(
            "layer index {k} out of range for {} layers",
            model.layers.len()
        )));
    }
    if shots == 0 {
        return Err(Error::invalid("shots must be ≥ 1"));
    }
    let psi = model.prepare_input(z)?;
    let p0 = hadamard_test_p0(&psi, |v| gradient_chain(model, k, v))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zeros = 0u64;
    for _ in 0..shots {
        if rng.gen::<f64>() < p0 {
            zeros += 1;
        }
    }
    let im_estimate = 1.0 - 2.0 * (zeros as f64 / shots as f64);
    Ok(2.0 * l * im_estimate)
}

/// Which gradient estimator SGD uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradMode {
    Analytic,
    HadamardShots,
    FiniteDiff,
}

/// SGD settings. `shots` only matters in `HadamardShots` mode, `epsilon`
/// only in `FiniteDiff` mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: u32,
    pub batch: usize,
    pub grad_mode: GradMode,
    pub shots: u64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 3,
            batch: 16,
            grad_mode: GradMode::Analytic,
            shots: 1000,
            epsilon: 1e-5,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.learning_rate < 0.0 || !self.learning_rate.is_finite() {
            return Err(Error::invalid("learning rate must be finite and ≥ 0"));
        }
        if self.batch == 0 {
            return Err(Error::invalid("batch size must be ≥ 1"));
        }
        if self.grad_mode == GradMode::HadamardShots && self.shots == 0 {
            return Err(Error::invalid("shots must be ≥ 1 in hadamard_shots mode"));
        }
        if self.grad_mode == GradMode::FiniteDiff && (self.epsilon <= 0.0 || !self.epsilon.is_finite())
        {
            return Err(Error::invalid("epsilon must be finite and > 0 in finite_diff mode"));
        }
        Ok(())
    }
}

/// Per-epoch training metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: u32,
    /// Mean loss over the examples as visited during the epoch.
    pub mean_loss: f64,
    /// Fraction of correct sign predictions as visited during the epoch.
    pub accuracy: f64,
}

/// Mini-batch SGD on the mean loss: θ ← θ − lr·ḡ per batch.
///
/// Examples are shuffled every epoch with the config seed; analytic and
/// finite-difference runs are fully deterministic for a fixed seed. The
/// returned history holds one entry per epoch.
pub fn train_sgd(
    model: &QnnModel,
    data: &[(Vec<i8>, i8)],
    cfg: &TrainConfig,
) -> Result<(QnnModel, Vec<EpochStats>)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::invalid("training data must be nonempty"));
    }
    for (z, label) in data {
        check_label(*label)?;
        if z.len() != model.data_qubits() {
            return Err(Error::invalid(format!(
                "example has {} pixels, model expects {}",
                z.len(),
                model.data_qubits()
            )));
        }
    }

    let mut trained = model.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut history = Vec::with_capacity(cfg.epochs as usize);

    for epoch in 0..cfg.epochs {
        let mut order: Vec<usize> = (0..data.len()).collect();
        // Fisher-Yates with the training RNG
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }

        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for chunk in order.chunks(cfg.batch) {
            // losses and predictions at the current θ, before the update
            let evals: Vec<(f64, Vec<f64>)> = match cfg.grad_mode {
                GradMode::Analytic => chunk
                    .par_iter()
                    .map(|&i| {
                        let (z, label) = &data[i];
                        let loss = qnn_loss(&trained, z, *label)?;
                        let grad = qnn_grad_analytic(&trained, z, *label)?;
                        Ok((loss, grad))
                    })
                    .collect::<Result<_>>()?,
                GradMode::FiniteDiff => chunk
                    .par_iter()
                    .map(|&i| {
                        let (z, label) = &data[i];
                        let loss = qnn_loss(&trained, z, *label)?;
                        let grad = qnn_grad_fd(&trained, z, *label, cfg.epsilon)?;
                        Ok((loss, grad))
                    })
                    .collect::<Result<_>>()?,
                GradMode::HadamardShots => {
                    // sequential: the estimator consumes the training RNG
                    let mut out = Vec::with_capacity(chunk.len());
                    for &i in chunk {
                        let (z, label) = &data[i];
                        let loss = qnn_loss(&trained, z, *label)?;
                        let mut grad = vec![0.0; trained.num_params()];
                        for (k, g) in grad.iter_mut().enumerate() {
                            let shot_seed = rng.gen::<u64>();
                            *g = hadamard_test_grad(&trained, z, *label, k, cfg.shots, shot_seed)?;
                        }
                        out.push((loss, grad));
                    }
                    out
                }
            };

            for (&i, (loss, _)) in chunk.iter().zip(&evals) {
                loss_sum += loss;
                let (_, label) = &data[i];
                // loss < 1 ⟺ l·forward > 0; loss == 1 ⟺ forward == 0 → predict +1
                let predicted_ok = if *loss < 1.0 {
                    true
                } else if *loss > 1.0 {
                    false
                } else {
                    *label == 1
                };
                if predicted_ok {
                    correct += 1;
                }
            }

            let mut mean_grad = vec![0.0; trained.num_params()];
            for (_, g) in &evals {
                for (m, &gi) in mean_grad.iter_mut().zip(g) {
                    *m += gi;
                }
            }
            let scale = cfg.learning_rate / chunk.len() as f64;
            let mut theta = trained.theta.clone();
            for (t, m) in theta.iter_mut().zip(&mean_grad) {
                *t -= scale * m;
            }
            trained.set_theta(theta)?;
        }

        history.push(EpochStats {
            epoch,
            mean_loss: loss_sum / data.len() as f64,
            accuracy: correct as f64 / data.len() as f64,
        });
    }
    Ok((trained, history))
}
