//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `-- --nocapture` to see them).

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmlsim::algos::{grover_search, grover_success_probability, OracleSpec};
use qmlsim::core::{
    apply, exp_pauli, rotation_gate, standard_gate, Axis, DensityMatrix, Pauli, PauliString,
    StateVector,
};
use qmlsim::encode::EncodingSpec;
use qmlsim::evolve::{evolve_exact, trotter_step, Hamiltonian, StochasticMatrix};
use qmlsim::kernel::{gram_matrix, kernel_value, krr_fit};
use qmlsim::pipeline::{run_experiment, write_synthetic_dataset, ExperimentConfig};
use qmlsim::qnn::{
    hadamard_test_grad, hadamard_test_p0, qnn_grad_analytic, qnn_grad_fd, QnnModel,
};
use qmlsim::regress::{gp_fit, gp_predict, pinv_fit, pinv_predict, GpKernel};

fn random_state(num_qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let raw: Vec<Complex64> = (0..1usize << num_qubits)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_qnn(rng: &mut ChaCha8Rng, data_qubits: usize, layer_count: usize) -> QnnModel {
    let width = data_qubits + 1;
    let readout = data_qubits;
    let letters = [Pauli::X, Pauli::Y, Pauli::Z];
    let layers: Vec<PauliString> = (0..layer_count)
        .map(|_| {
            let readout_letter = letters[rng.gen_range(0..3)];
            if rng.gen_bool(0.25) {
                PauliString::single(width, readout, readout_letter).unwrap()
            } else {
                let j = rng.gen_range(0..data_qubits);
                let data_letter = letters[rng.gen_range(0..3)];
                PauliString::two(width, (j, data_letter), (readout, readout_letter)).unwrap()
            }
        })
        .collect();
    let mut model = QnnModel::new(data_qubits, layers).unwrap();
    let theta: Vec<f64> = (0..layer_count)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    model.set_theta(theta).unwrap();
    model
}

fn random_input(rng: &mut ChaCha8Rng, n: usize) -> (Vec<i8>, i8) {
    let z: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let label = if rng.gen::<bool>() { 1 } else { -1 };
    (z, label)
}

#[test]
fn acceptance_01_gradient_fidelity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let eps = 1e-4;
    let bound = 10.0 * eps * eps;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let data_qubits = rng.gen_range(2..=4); // 3..=5 qubits total
        let layer_count = rng.gen_range(1..=8);
        let model = random_qnn(&mut rng, data_qubits, layer_count);
        let (z, label) = random_input(&mut rng, data_qubits);
        let analytic = qnn_grad_analytic(&model, &z, label).unwrap();
        let fd = qnn_grad_fd(&model, &z, label, eps).unwrap();
        for (a, f) in analytic.iter().zip(&fd) {
            worst = worst.max((a - f).abs());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        worst <= bound,
        "max analytic-vs-central-difference error {worst:.3e} exceeds {bound:.1e}"
    );
    assert!(elapsed < 30.0, "took {elapsed:.1}s, budget 30s");
    println!(
        "ACCEPTANCE 1 (gradient fidelity): PASS — max component error {worst:.3e} ≤ {bound:.1e}, {elapsed:.2}s"
    );
}

#[test]
fn acceptance_02_hadamard_test() {
    // exact protocol probability equals 1/2 − Im/2 with no sampling
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_exact: f64 = 0.0;
    for _ in 0..50 {
        let data_qubits = rng.gen_range(1..=3);
        let layer_count = rng.gen_range(1..=4);
        let model = random_qnn(&mut rng, data_qubits, layer_count);
        let (z, _) = random_input(&mut rng, data_qubits);
        let k = rng.gen_range(0..layer_count);
        let psi = model.prepare_input(&z).unwrap();
        // reference: direct statevector contraction of ⟨z,1|𝒰|z,1⟩ through
        // the analytic-gradient identity grad_k = 2·l·Im (use l = +1)
        let im = qnn_grad_analytic(&model, &z, 1).unwrap()[k] / 2.0;
        let p0 = hadamard_test_p0(&psi, |v| {
            // the same 2L+2 chain the estimator simulates
            chain(&model, k, v)
        })
        .unwrap();
        worst_exact = worst_exact.max((p0 - (0.5 - im / 2.0)).abs());
    }
    assert!(
        worst_exact <= 1e-10,
        "exact protocol probability off by {worst_exact:.3e}"
    );

    // sampled estimates concentrate: ≥ 99 of 100 seeded trials within 3/√shots
    let shots = 100_000u64;
    let tol = 3.0 / (shots as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let mut hits = 0;
    for trial in 0..100u64 {
        let data_qubits = rng.gen_range(1..=3);
        let layer_count = rng.gen_range(1..=4);
        let model = random_qnn(&mut rng, data_qubits, layer_count);
        let (z, label) = random_input(&mut rng, data_qubits);
        let k = rng.gen_range(0..layer_count);
        let exact_im = (label as f64) * qnn_grad_analytic(&model, &z, label).unwrap()[k] / 2.0;
        let est = hadamard_test_grad(&model, &z, label, k, shots, 7000 + trial).unwrap();
        let est_im = (label as f64) * est / 2.0;
        if (est_im - exact_im).abs() <= tol {
            hits += 1;
        }
    }
    assert!(hits >= 99, "only {hits}/100 trials within 3/√shots");
    println!(
        "ACCEPTANCE 2 (Hadamard test): PASS — exact protocol error {worst_exact:.2e} ≤ 1e-10, {hits}/100 sampled trials within {tol:.2e}"
    );
}

// the 2L+2 unitary chain 𝒰(θ) for layer k, re-built here so the acceptance
// check does not reuse the estimator's own internals
fn chain(model: &QnnModel, k: usize, v: &StateVector) -> qmlsim::Result<StateVector> {
    use qmlsim::core::{apply_exp_pauli, apply_pauli};
    let mut s = v.clone();
    for i in 0..=k {
        s = apply_exp_pauli(&s, model.theta()[i], &model.layers()[i])?;
    }
    s = apply_pauli(&s, &model.layers()[k])?;
    for i in k + 1..model.layers().len() {
        s = apply_exp_pauli(&s, model.theta()[i], &model.layers()[i])?;
    }
    s = apply_pauli(&s, &model.readout_observable())?;
    for i in (0..model.layers().len()).rev() {
        s = apply_exp_pauli(&s, -model.theta()[i], &model.layers()[i])?;
    }
    Ok(s)
}

#[test]
fn acceptance_03_grover() {
    let mut worst: f64 = 0.0;
    for n_pow in 2..=10u32 {
        let n = 1usize << n_pow;
        let oracle = OracleSpec::new(n, n / 2).unwrap();
        for k in 0..=50u32 {
            let outcome = grover_search(&oracle, Some(k), 42).unwrap();
            let expect = grover_success_probability(n, 1, k);
            worst = worst.max((outcome.success_probability - expect).abs());
        }
    }
    assert!(worst <= 1e-9, "probability mismatch {worst:.3e}");

    let certain = grover_search(&OracleSpec::new(4, 1).unwrap(), Some(1), 0).unwrap();
    assert!((certain.success_probability - 1.0).abs() <= 1e-9);
    println!(
        "ACCEPTANCE 3 (Grover): PASS — max |simulated − sin²((2k+1)θ)| = {worst:.3e} over N ≤ 1024, k ≤ 50; N=4,k=1 → {:.12}",
        certain.success_probability
    );
}

#[test]
fn acceptance_04_kernel_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let specs = [
        (EncodingSpec::amplitude(4).unwrap(), 4usize, true),
        (EncodingSpec::basis(6).unwrap(), 6, false),
        (EncodingSpec::angle(4).unwrap(), 4, true),
    ];
    let mut worst: f64 = 0.0;
    for (spec, n_features, continuous) in &specs {
        for _ in 0..1000 {
            let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                (0..*n_features)
                    .map(|_| {
                        if *continuous {
                            rng.gen_range(-2.0..2.0)
                        } else {
                            f64::from(rng.gen::<bool>())
                        }
                    })
                    .collect()
            };
            let (x, x2) = (draw(&mut rng), draw(&mut rng));
            let phi = spec.encode(&x).unwrap();
            let phi2 = spec.encode(&x2).unwrap();
            let overlap = phi2.inner(&phi).unwrap().norm_sqr();
            let trace = DensityMatrix::from_pure(&phi)
                .product_trace(&DensityMatrix::from_pure(&phi2))
                .unwrap();
            worst = worst.max((overlap - trace).abs());
            // kernel_value re-checks the same identity internally
            kernel_value(&x, &x2, spec).unwrap();
        }
    }
    assert!(worst <= 1e-10, "duality violated by {worst:.3e}");

    // Gram PSD at M = 50 for every encoding
    let mut min_eig = f64::INFINITY;
    for (spec, n_features, continuous) in &specs {
        let xs: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                (0..*n_features)
                    .map(|_| {
                        if *continuous {
                            rng.gen_range(-2.0..2.0)
                        } else {
                            f64::from(rng.gen::<bool>())
                        }
                    })
                    .collect()
            })
            .collect();
        let gram = gram_matrix(&xs, spec).unwrap();
        let eig = gram.symmetric_eigen();
        min_eig = min_eig.min(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    assert!(min_eig >= -1e-9, "Gram min eigenvalue {min_eig:.3e}");
    println!(
        "ACCEPTANCE 4 (kernel duality): PASS — max route disagreement {worst:.3e} over 3000 pairs, Gram min eigenvalue {min_eig:.3e} ≥ -1e-9"
    );
}

#[test]
fn acceptance_05_representer_krr() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let spec = EncodingSpec::amplitude(4).unwrap();
    let m = 8usize;
    let xs: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let ys: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let gamma = 0.1;

    let closed = krr_fit(&xs, &ys, &spec, gamma).unwrap();

    // gradient descent on R(α) = (1/M)‖y − Kα‖² + γ·αᵀKα, run to tight
    // convergence with exact line search (the objective is quadratic)
    let k = gram_matrix(&xs, &spec).unwrap();
    let y = DVector::from_column_slice(&ys);
    let m_f = m as f64;
    let hessian = (&k * &k) * (2.0 / m_f) + &k * (2.0 * gamma);
    let linear = &k * &y * (2.0 / m_f);
    let mut alpha = DVector::zeros(m);
    let mut iterations = 0u64;
    loop {
        let grad = &hessian * &alpha - &linear;
        let g2 = grad.dot(&grad);
        if g2 < 1e-28 || iterations >= 5_000_000 {
            break;
        }
        let step = g2 / grad.dot(&(&hessian * &grad));
        alpha -= grad * step;
        iterations += 1;
    }
    let max_dev = closed
        .coefficients
        .iter()
        .zip(alpha.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_dev <= 1e-6,
        "closed form vs gradient descent differ by {max_dev:.3e} after {iterations} iterations"
    );
    println!(
        "ACCEPTANCE 5 (representer/KRR): PASS — coefficient deviation {max_dev:.3e} ≤ 1e-6 ({iterations} GD iterations)"
    );
}

#[test]
fn acceptance_06_qft() {
    // dense transform vs the definition formula's matrix, q ≤ 256
    let mut worst_dense: f64 = 0.0;
    for n in 1..=8usize {
        let q = 1usize << n;
        for x in 0..q {
            let state = StateVector::basis_index(n, x).unwrap();
            let out = qmlsim::evolve::qft(q, &state).unwrap();
            for (p, amp) in out.amplitudes().iter().enumerate() {
                let phase = std::f64::consts::TAU * ((p * x) % q) as f64 / q as f64;
                let expect = Complex64::new(phase.cos(), phase.sin()) / (q as f64).sqrt();
                worst_dense = worst_dense.max((amp - expect).norm());
            }
        }
    }
    assert!(worst_dense <= 1e-9, "dense QFT off by {worst_dense:.3e}");

    // gate decomposition agrees with the dense unitary
    let mut worst_gates: f64 = 0.0;
    for n in 1..=8usize {
        let q = 1usize << n;
        let gates = qmlsim::evolve::qft_gate_decomposition(n).unwrap();
        for x in 0..q {
            let state = StateVector::basis_index(n, x).unwrap();
            let dense = qmlsim::evolve::qft(q, &state).unwrap();
            let mut circ = state;
            for g in &gates {
                circ = apply(&circ, g).unwrap();
            }
            for (a, b) in circ.amplitudes().iter().zip(dense.amplitudes()) {
                worst_gates = worst_gates.max((a - b).norm());
            }
        }
    }
    assert!(worst_gates <= 1e-9, "gate QFT off by {worst_gates:.3e}");
    println!(
        "ACCEPTANCE 6 (QFT): PASS — definition-formula error {worst_dense:.3e}, gate-decomposition error {worst_gates:.3e}, q ≤ 256"
    );
}

#[test]
fn acceptance_07_trotter_scaling() {
    fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
        let gram = m.adjoint() * m;
        gram.symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
            .max(0.0)
            .sqrt()
    }
    fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = m.nrows();
        let mut sum = DMatrix::<Complex64>::identity(dim, dim);
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        for k in 1..80 {
            term = (&term * m) / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let delta = 0.05;
    let mut ratios = Vec::new();
    while ratios.len() < 20 {
        let draw = |rng: &mut ChaCha8Rng| {
            PauliString::new(vec![letters[rng.gen_range(0..4)], letters[rng.gen_range(0..4)]])
                .unwrap()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        if commutes(&a, &b) {
            continue;
        }
        let ca = rng.gen_range(0.3..1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let cb = rng.gen_range(0.3..1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let h = Hamiltonian::new(vec![(ca, a), (cb, b)]).unwrap();
        let dense = h.dense().unwrap();
        let err = |d: f64| {
            let u = trotter_step(&h, d).unwrap();
            let exact = expm(&(&dense * Complex64::new(0.0, -d)));
            spectral_norm(&(u.matrix() - exact))
        };
        ratios.push(err(delta) / err(delta / 2.0));
    }
    for (i, r) in ratios.iter().enumerate() {
        assert!(
            (6.0..=10.0).contains(r),
            "Hamiltonian {i}: error ratio {r} outside [6, 10]"
        );
    }
    let mean: f64 = ratios.iter().sum::<f64>() / ratios.len() as f64;
    println!(
        "ACCEPTANCE 7 (Trotter second order): PASS — 20/20 halving ratios in [6, 10], mean {mean:.2} (theory 8)"
    );
}

fn commutes(a: &PauliString, b: &PauliString) -> bool {
    let anti = a
        .letters()
        .iter()
        .zip(b.letters())
        .filter(|(x, y)| **x != Pauli::I && **y != Pauli::I && x != y)
        .count();
    anti % 2 == 0
}

#[test]
fn acceptance_08_regression_gp() {
    // oracle: Gaussian elimination, independent of nalgebra's factorizations
    #[allow(clippy::needless_range_loop)] // paired read/write row indexing
    fn gauss_solve(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = a[(i, j)];
            }
            m[i][n] = b[i];
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| m[p][col].abs().partial_cmp(&m[q][col].abs()).unwrap())
                .unwrap();
            m.swap(col, pivot);
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let mut acc = m[r][n];
            for c in r + 1..n {
                acc -= m[r][c] * x[c];
            }
            x[r] = acc / m[r][r];
        }
        x
    }

    let mut rng = ChaCha8Rng::seed_from_u64(808);

    // pseudo-inverse regression vs the normal-equations oracle
    let mut worst_pinv: f64 = 0.0;
    for _ in 0..10 {
        let x = DMatrix::from_fn(10, 3, |_, _| rng.gen_range(-1.0..1.0));
        let y: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let model = pinv_fit(&x, &y).unwrap();
        let xtx = x.transpose() * &x;
        let xty = x.transpose() * DVector::from_column_slice(&y);
        let oracle_beta = gauss_solve(&xtx, xty.as_slice());
        for _ in 0..5 {
            let probe: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let pred = pinv_predict(&model, &probe).unwrap();
            let oracle: f64 = probe.iter().zip(&oracle_beta).map(|(a, b)| a * b).sum();
            worst_pinv = worst_pinv.max((pred - oracle).abs());
        }
    }
    assert!(worst_pinv <= 1e-8, "pinv prediction off by {worst_pinv:.3e}");

    // GP predictions vs the oracle solve on random 20-point problems
    let mut worst_gp: f64 = 0.0;
    let n = 20;
    let inputs: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let targets: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let bandwidth = 0.9;
    let noise = 0.05;
    let model = gp_fit(&inputs, &targets, GpKernel::Rbf { bandwidth }, noise).unwrap();
    let rbf = |a: &[f64], b: &[f64]| {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        (-d2 / (2.0 * bandwidth * bandwidth)).exp()
    };
    let mut km = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            km[(i, j)] = rbf(&inputs[i], &inputs[j]);
        }
        km[(i, i)] += noise;
    }
    for _ in 0..20 {
        let x_star: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (mean, var) = gp_predict(&model, &x_star).unwrap();
        let k_star: Vec<f64> = inputs.iter().map(|xi| rbf(xi, &x_star)).collect();
        let w = gauss_solve(&km, &targets);
        let oracle_mean: f64 = k_star.iter().zip(&w).map(|(a, b)| a * b).sum();
        let solved = gauss_solve(&km, &k_star);
        let oracle_var = 1.0 - k_star.iter().zip(&solved).map(|(a, b)| a * b).sum::<f64>();
        worst_gp = worst_gp.max((mean - oracle_mean).abs()).max((var - oracle_var).abs());
    }
    assert!(worst_gp <= 1e-8, "GP prediction off by {worst_gp:.3e}");

    // GP variance at training points vanishes as σ² → 0
    let tight = gp_fit(&inputs, &targets, GpKernel::Rbf { bandwidth }, 1e-12).unwrap();
    let mut worst_var: f64 = 0.0;
    for x in &inputs {
        let (_, var) = gp_predict(&tight, x).unwrap();
        worst_var = worst_var.max(var);
    }
    assert!(worst_var <= 1e-8, "training-point variance {worst_var:.3e}");
    println!(
        "ACCEPTANCE 8 (regression/GP): PASS — pinv error {worst_pinv:.3e}, GP error {worst_gp:.3e}, training variance {worst_var:.3e} (σ² = 1e-12)"
    );
}

#[test]
fn acceptance_09_image_experiment() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let paths = write_synthetic_dataset(dir.path(), 700, 700, 123).unwrap();
    let config = ExperimentConfig::with_data(
        paths.train_images,
        paths.train_labels,
        paths.test_images,
        paths.test_labels,
    );
    assert_eq!(config.train_size, 500);
    assert_eq!(config.test_size, 500);

    let first = run_experiment(&config).unwrap();
    assert!(
        first.report.accuracy >= 0.80,
        "test accuracy {} below 0.80",
        first.report.accuracy
    );

    // byte determinism: wall time is the only permitted difference
    let second = run_experiment(&config).unwrap();
    let strip = |r: &qmlsim::pipeline::ExperimentReport| {
        let mut r = r.clone();
        r.wall_time_s = 0.0;
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(strip(&first.report), strip(&second.report));
    assert_eq!(
        qmlsim::pipeline::curve_to_csv(&first.curve),
        qmlsim::pipeline::curve_to_csv(&second.curve)
    );
    assert_eq!(
        serde_json::to_string(&first.model).unwrap(),
        serde_json::to_string(&second.model).unwrap()
    );

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 900.0, "two runs took {elapsed:.0}s, budget 900s");
    println!(
        "ACCEPTANCE 9 (image experiment): PASS — accuracy {:.3} ≥ 0.80 on 500/500 (seed 7), byte-deterministic, {elapsed:.0}s for two runs",
        first.report.accuracy
    );
}

#[test]
fn acceptance_10_paradigm_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);

    // unitary evolution preserves the L2 norm
    let mut worst_l2: f64 = 0.0;
    for _ in 0..1000 {
        let mut state = random_state(3, &mut rng);
        for _ in 0..5 {
            let gate = match rng.gen_range(0..4) {
                0 => standard_gate("H", &[rng.gen_range(0..3)]).unwrap(),
                1 => {
                    let a = rng.gen_range(0..3);
                    let b = (a + rng.gen_range(1..3)) % 3;
                    standard_gate("CNOT", &[a, b]).unwrap()
                }
                2 => rotation_gate(Axis::Y, rng.gen_range(-3.0..3.0), rng.gen_range(0..3)).unwrap(),
                _ => {
                    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
                    let s = PauliString::new(
                        (0..3).map(|_| letters[rng.gen_range(0..4)]).collect(),
                    )
                    .unwrap();
                    exp_pauli(rng.gen_range(-3.0..3.0), &s).unwrap()
                }
            };
            state = apply(&state, &gate).unwrap();
        }
        worst_l2 = worst_l2.max((state.norm() - 1.0).abs());
    }
    assert!(worst_l2 <= 1e-12, "L2 norm drifted by {worst_l2:.3e}");

    // stochastic evolution preserves the L1 norm and nonnegativity
    let mut worst_l1: f64 = 0.0;
    for _ in 0..1000 {
        let dim = rng.gen_range(2..=6);
        let mut cols = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let raw: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = raw.iter().sum();
            cols.extend(raw.iter().map(|v| v / s));
        }
        let p = StochasticMatrix::new(DMatrix::from_vec(dim, dim, cols)).unwrap();
        let raw: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let p0: Vec<f64> = raw.iter().map(|v| v / s).collect();
        let out = qmlsim::evolve::markov_evolve(&p0, &p, 20).unwrap();
        assert!(out.iter().all(|&v| v >= 0.0), "negative probability");
        let total: f64 = out.iter().sum();
        worst_l1 = worst_l1.max((total - 1.0).abs());
    }
    assert!(worst_l1 <= 1e-12, "L1 norm drifted by {worst_l1:.3e}");

    // and the exact unitary propagator itself
    let h = Hamiltonian::parse("0.7 XZ\n-0.4 ZY").unwrap();
    let mut worst_exact: f64 = 0.0;
    for _ in 0..100 {
        let state = random_state(2, &mut rng);
        let out = evolve_exact(&h, rng.gen_range(-2.0..2.0), &state).unwrap();
        worst_exact = worst_exact.max((out.norm() - 1.0).abs());
    }
    assert!(worst_exact <= 1e-10);
    println!(
        "ACCEPTANCE 10 (paradigm parity): PASS — 1000 unitary trials L2 drift {worst_l2:.3e}, 1000 stochastic trials L1 drift {worst_l1:.3e}"
    );
}
