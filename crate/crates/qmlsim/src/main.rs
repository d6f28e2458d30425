//! Command-line front end: every subcommand parses arguments, calls one
//! library entry point, prints a JSON summary to stdout and writes any bulk
//! artifacts (CSV, model files) under `--out`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data-format error,
//! 4 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qmlsim::core::{measure_shots, run_circuit, Circuit, StateVector};
use qmlsim::encode::{EncodingKind, EncodingSpec};
use qmlsim::error::Error;
use qmlsim::evolve::{evolve_exact, evolve_trotter, qft, Hamiltonian};
use qmlsim::kernel::{gram_matrix, krr_fit, krr_predict};
use qmlsim::pipeline::{curve_to_csv, run_experiment, write_synthetic_dataset, ExperimentConfig};
use qmlsim::qnn::{train_sgd, GradMode, QnnModel, TrainConfig};
use qmlsim::regress::{gp_fit, gp_predict, pinv_fit, pinv_predict, GpKernel};

#[derive(Parser)]
#[command(name = "qmlsim", version, about = "Quantum machine-learning simulation toolkit")]
struct Cli {
    /// RNG seed used by every stochastic subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for file outputs (CSV, models, reports).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// JSON config file; recognized by `mnist` (full ExperimentConfig).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit from its text file on a basis state.
    Simulate(SimulateArgs),
    /// Apply the quantum Fourier transform to a basis state.
    Qft(QftArgs),
    /// Compare Trotterized evolution against the exact propagator.
    Trotter(TrotterArgs),
    /// Grover search for a marked index.
    Grover(GroverArgs),
    /// Grover-driven minimization of a loss table.
    Minmap(MinmapArgs),
    /// Gram matrix of a dataset under a quantum encoding.
    Kernel(KernelArgs),
    /// Kernel ridge regression: fit, report training MSE, predict.
    Krr(KrrArgs),
    /// Gaussian-process regression with a quantum or RBF kernel.
    Gp(GpArgs),
    /// Pseudo-inverse linear regression.
    Pinv(PinvArgs),
    /// Train a variational classifier on a ±1 CSV dataset.
    QnnTrain(QnnTrainArgs),
    /// The full binary-digit image experiment.
    Mnist(MnistArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit text file (`GATE target[,target] [param_slot]` per line).
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    qubits: usize,
    /// Initial basis state as a bit string, qubit 0 first (default all zeros).
    #[arg(long)]
    bits: Option<String>,
    /// Comma-separated parameter values bound to the circuit's slots.
    #[arg(long)]
    params: Option<String>,
    /// When set, sample this many measurement shots instead of printing
    /// amplitudes.
    #[arg(long)]
    shots: Option<u64>,
}

#[derive(Args)]
struct QftArgs {
    /// Hilbert-space dimension (power of two).
    #[arg(long)]
    q: usize,
    /// Input basis index.
    #[arg(long, default_value_t = 0)]
    basis: usize,
}

#[derive(Args)]
struct TrotterArgs {
    /// Hamiltonian text file (`coeff PAULI_LETTERS` per line).
    #[arg(long)]
    hamiltonian: PathBuf,
    #[arg(long)]
    time: f64,
    #[arg(long)]
    steps: u32,
    /// Initial basis index.
    #[arg(long, default_value_t = 0)]
    basis: usize,
}

#[derive(Args)]
struct GroverArgs {
    /// Domain size (power of two).
    #[arg(long)]
    n: usize,
    /// Marked index.
    #[arg(long)]
    marked: usize,
    /// Iteration count (default ⌊π/4·√N⌋).
    #[arg(long)]
    iters: Option<u32>,
}

#[derive(Args)]
struct MinmapArgs {
    /// Loss table file, one value per line.
    #[arg(long)]
    table: PathBuf,
    /// Optional penalty table, combined as loss + λ·penalty.
    #[arg(long)]
    penalty: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Threshold-descent rounds (default 30·log₂|Y|).
    #[arg(long)]
    budget: Option<u32>,
}

#[derive(Args)]
struct KernelArgs {
    /// CSV dataset, label in the last column.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_parser = parse_encoding)]
    encoding: EncodingKind,
}

#[derive(Args)]
struct KrrArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_parser = parse_encoding)]
    encoding: EncodingKind,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    /// Optional CSV of inputs to predict on.
    #[arg(long)]
    predict: Option<PathBuf>,
}

#[derive(Args)]
struct GpArgs {
    #[arg(long)]
    data: PathBuf,
    /// `amplitude`, `angle`, `basis`, or `rbf`.
    #[arg(long)]
    kernel: String,
    /// RBF bandwidth (rbf kernel only).
    #[arg(long, default_value_t = 1.0)]
    bandwidth: f64,
    /// Observation noise variance σ².
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    predict: Option<PathBuf>,
}

#[derive(Args)]
struct PinvArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    predict: Option<PathBuf>,
}

#[derive(Args)]
struct QnnTrainArgs {
    /// CSV of ±1 pixels with a ±1 label in the last column.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 3)]
    epochs: u32,
    #[arg(long, default_value_t = 4)]
    batch: usize,
    #[arg(long, default_value = "analytic", value_parser = parse_grad_mode)]
    grad_mode: GradMode,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 1e-5)]
    epsilon: f64,
}

#[derive(Args)]
struct MnistArgs {
    #[arg(long)]
    train_images: Option<PathBuf>,
    #[arg(long)]
    train_labels: Option<PathBuf>,
    #[arg(long)]
    test_images: Option<PathBuf>,
    #[arg(long)]
    test_labels: Option<PathBuf>,
    /// Generate a deterministic synthetic digit dataset into this directory
    /// and run on it (no real data files needed).
    #[arg(long)]
    synth: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    train_size: usize,
    #[arg(long, default_value_t = 500)]
    test_size: usize,
    /// Use every surviving example instead of subsampling.
    #[arg(long)]
    full_split: bool,
    #[arg(long)]
    epochs: Option<u32>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    batch: Option<usize>,
}

fn parse_encoding(s: &str) -> Result<EncodingKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "basis" => Ok(EncodingKind::Basis),
        "amplitude" => Ok(EncodingKind::Amplitude),
        "angle" => Ok(EncodingKind::Angle),
        other => Err(format!("unknown encoding '{other}'")),
    }
}

fn parse_grad_mode(s: &str) -> Result<GradMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "analytic" => Ok(GradMode::Analytic),
        "hadamard_shots" => Ok(GradMode::HadamardShots),
        "finite_diff" => Ok(GradMode::FiniteDiff),
        other => Err(format!("unknown gradient mode '{other}'")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: cannot configure {} threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::Format { .. } | Error::Io(_) | Error::Json(_) => 3,
        Error::SingularMatrix(_)
        | Error::UnsupportedSize(_)
        | Error::IllConditioned(_)
        | Error::Numerical(_) => 4,
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn amplitudes_json(state: &StateVector) -> serde_json::Value {
    json!(state
        .amplitudes()
        .iter()
        .map(|a| json!([a.re, a.im]))
        .collect::<Vec<_>>())
}

fn read_table(path: &Path) -> qmlsim::Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse::<f64>().map_err(|_| Error::Format {
            msg: format!("bad number '{line}'"),
            offset: lineno + 1,
        })?);
    }
    Ok(out)
}

fn run(cli: &Cli) -> qmlsim::Result<()> {
    fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Simulate(args) => {
            let text = fs::read_to_string(&args.circuit)?;
            let circuit = Circuit::parse(&text, args.qubits)?;
            let bits: Vec<u8> = match &args.bits {
                Some(s) => s
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(Error::InvalidArgument(format!("bad bit '{other}'"))),
                    })
                    .collect::<qmlsim::Result<_>>()?,
                None => vec![0; args.qubits],
            };
            let theta: Vec<f64> = match &args.params {
                Some(s) => s
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad parameter '{v}'")))
                    })
                    .collect::<qmlsim::Result<_>>()?,
                None => Vec::new(),
            };
            let state = run_circuit(&circuit, &theta, &StateVector::basis(args.qubits, &bits)?)?;
            if let Some(shots) = args.shots {
                let counts = measure_shots(&state, shots, cli.seed)?;
                print_json(&json!({
                    "qubits": args.qubits,
                    "shots": shots,
                    "counts": counts
                        .iter()
                        .map(|(k, v)| (k.to_string(), *v))
                        .collect::<std::collections::BTreeMap<String, u64>>(),
                }));
            } else {
                print_json(&json!({
                    "qubits": args.qubits,
                    "amplitudes": amplitudes_json(&state),
                }));
            }
        }
        Command::Qft(args) => {
            if args.q < 2 || !args.q.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "q must be a power of two ≥ 2, got {}",
                    args.q
                )));
            }
            let n = args.q.trailing_zeros() as usize;
            let state = qft(args.q, &StateVector::basis_index(n, args.basis)?)?;
            print_json(&json!({
                "q": args.q,
                "basis": args.basis,
                "amplitudes": amplitudes_json(&state),
            }));
        }
        Command::Trotter(args) => {
            let h = Hamiltonian::parse(&fs::read_to_string(&args.hamiltonian)?)?;
            let init = StateVector::basis_index(h.num_qubits(), args.basis)?;
            let approx = evolve_trotter(&h, args.time, args.steps, &init)?;
            let exact = evolve_exact(&h, args.time, &init)?;
            let max_dev = approx
                .amplitudes()
                .iter()
                .zip(exact.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            print_json(&json!({
                "qubits": h.num_qubits(),
                "time": args.time,
                "steps": args.steps,
                "max_amplitude_error_vs_exact": max_dev,
                "amplitudes": amplitudes_json(&approx),
            }));
        }
        Command::Grover(args) => {
            let oracle = qmlsim::algos::OracleSpec::new(args.n, args.marked)?;
            let outcome = qmlsim::algos::grover_search(&oracle, args.iters, cli.seed)?;
            print_json(&json!({
                "index": outcome.index,
                "value": if outcome.index == args.marked { 1 } else { 0 },
                "prob": outcome.success_probability,
                "iterations": outcome.iterations,
            }));
        }
        Command::Minmap(args) => {
            let losses = read_table(&args.table)?;
            let obj = match &args.penalty {
                Some(p) => {
                    qmlsim::algos::MapObjective::from_parts(&losses, &read_table(p)?, args.lambda)?
                }
                None => qmlsim::algos::MapObjective::new(losses.clone(), args.lambda)?,
            };
            let budget = args.budget.unwrap_or_else(|| {
                30 * (obj.candidate_count() as f64).log2().ceil().max(1.0) as u32
            });
            let (index, value) = qmlsim::algos::minimize_map(&obj, cli.seed, budget)?;
            // verification bit: did the search land on the true minimum
            let scan = obj.losses().iter().cloned().fold(f64::INFINITY, f64::min);
            print_json(&json!({
                "index": index,
                "value": value,
                "prob": if value == scan { 1.0 } else { 0.0 },
                "budget": budget,
            }));
        }
        Command::Kernel(args) => {
            let (xs, _) = qmlsim::encode::load_csv_dataset(&args.data)?;
            let spec = EncodingSpec::new(args.encoding, xs[0].len())?;
            let gram = gram_matrix(&xs, &spec)?;
            let eig = gram.clone().symmetric_eigen();
            let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            let gram_path = cli.out.join("gram.csv");
            let mut csv = String::new();
            for i in 0..gram.nrows() {
                let row: Vec<String> =
                    (0..gram.ncols()).map(|j| gram[(i, j)].to_string()).collect();
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            fs::write(&gram_path, csv)?;
            print_json(&json!({
                "samples": xs.len(),
                "min_eigenvalue": min_eig,
                "gram_csv": gram_path,
            }));
        }
        Command::Krr(args) => {
            let (xs, ys) = qmlsim::encode::load_csv_dataset(&args.data)?;
            let spec = EncodingSpec::new(args.encoding, xs[0].len())?;
            let model = krr_fit(&xs, &ys, &spec, args.gamma)?;
            let mse: f64 = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| Ok((krr_predict(&model, x)? - y).powi(2)))
                .collect::<qmlsim::Result<Vec<f64>>>()?
                .iter()
                .sum::<f64>()
                / xs.len() as f64;
            let model_path = cli.out.join("krr_model.json");
            model.save(&model_path)?;
            let mut summary = json!({
                "samples": xs.len(),
                "gamma": args.gamma,
                "train_mse": mse,
                "model": model_path,
            });
            if let Some(p) = &args.predict {
                let (px, _) = qmlsim::encode::load_csv_dataset(p)?;
                let preds: Vec<f64> = px
                    .iter()
                    .map(|x| krr_predict(&model, x))
                    .collect::<qmlsim::Result<_>>()?;
                let pred_path = cli.out.join("krr_predictions.csv");
                fs::write(
                    &pred_path,
                    preds.iter().map(|v| format!("{v}\n")).collect::<String>(),
                )?;
                summary["predictions"] = json!(pred_path);
            }
            print_json(&summary);
        }
        Command::Gp(args) => {
            let (xs, ys) = qmlsim::encode::load_csv_dataset(&args.data)?;
            let kernel = match args.kernel.to_ascii_lowercase().as_str() {
                "rbf" => GpKernel::Rbf {
                    bandwidth: args.bandwidth,
                },
                enc => GpKernel::Encoding(EncodingSpec::new(
                    parse_encoding(enc).map_err(Error::InvalidArgument)?,
                    xs[0].len(),
                )?),
            };
            let model = gp_fit(&xs, &ys, kernel, args.noise)?;
            let mut summary = json!({
                "samples": xs.len(),
                "noise": args.noise,
                "jitter": model.jitter(),
            });
            if let Some(p) = &args.predict {
                let (px, _) = qmlsim::encode::load_csv_dataset(p)?;
                let pred_path = cli.out.join("gp_predictions.csv");
                let mut csv = String::from("mean,variance\n");
                for x in &px {
                    let (mean, var) = gp_predict(&model, x)?;
                    csv.push_str(&format!("{mean},{var}\n"));
                }
                fs::write(&pred_path, csv)?;
                summary["predictions"] = json!(pred_path);
            }
            print_json(&summary);
        }
        Command::Pinv(args) => {
            let (xs, ys) = qmlsim::encode::load_csv_dataset(&args.data)?;
            let rows = xs.len();
            let cols = xs[0].len();
            let x = nalgebra::DMatrix::from_fn(rows, cols, |i, j| xs[i][j]);
            let model = pinv_fit(&x, &ys)?;
            let mut summary = json!({
                "rows": rows,
                "cols": cols,
                "rank": model.rank(),
                "coefficients": model.coefficients(),
                "singular_values": model.singular_values(),
            });
            if let Some(p) = &args.predict {
                let (px, _) = qmlsim::encode::load_csv_dataset(p)?;
                let preds: Vec<f64> = px
                    .iter()
                    .map(|row| pinv_predict(&model, row))
                    .collect::<qmlsim::Result<_>>()?;
                let pred_path = cli.out.join("pinv_predictions.csv");
                fs::write(
                    &pred_path,
                    preds.iter().map(|v| format!("{v}\n")).collect::<String>(),
                )?;
                summary["predictions"] = json!(pred_path);
            }
            print_json(&summary);
        }
        Command::QnnTrain(args) => {
            let (xs, ys) = qmlsim::encode::load_csv_dataset(&args.data)?;
            let data: Vec<(Vec<i8>, i8)> = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| {
                    let z: Vec<i8> = x
                        .iter()
                        .map(|&v| {
                            if v == 1.0 {
                                Ok(1i8)
                            } else if v == -1.0 {
                                Ok(-1i8)
                            } else {
                                Err(Error::InvalidArgument(format!("pixels must be ±1, got {v}")))
                            }
                        })
                        .collect::<qmlsim::Result<_>>()?;
                    let label = if *y == 1.0 {
                        1i8
                    } else if *y == -1.0 {
                        -1i8
                    } else {
                        return Err(Error::InvalidArgument(format!(
                            "labels must be ±1, got {y}"
                        )));
                    };
                    Ok((z, label))
                })
                .collect::<qmlsim::Result<_>>()?;
            let model = QnnModel::two_sweep(data[0].0.len())?;
            let cfg = TrainConfig {
                learning_rate: args.lr,
                epochs: args.epochs,
                batch: args.batch,
                grad_mode: args.grad_mode,
                shots: args.shots,
                epsilon: args.epsilon,
                seed: cli.seed,
            };
            let (trained, history) = train_sgd(&model, &data, &cfg)?;
            let ckpt_path = cli.out.join("qnn_model.json");
            trained.save(&ckpt_path)?;
            let log_path = cli.out.join("qnn_training.csv");
            fs::write(&log_path, curve_to_csv(&history))?;
            print_json(&json!({
                "examples": data.len(),
                "parameters": trained.num_params(),
                "final_loss": history.last().map(|h| h.mean_loss),
                "final_train_accuracy": history.last().map(|h| h.accuracy),
                "checkpoint": ckpt_path,
                "log": log_path,
            }));
        }
        Command::Mnist(args) => {
            let mut config = if let Some(cfg_path) = &cli.config {
                serde_json::from_str::<ExperimentConfig>(&fs::read_to_string(cfg_path)?)?
            } else {
                let paths = if let Some(dir) = &args.synth {
                    let p = write_synthetic_dataset(dir, 700, 700, 123)?;
                    (p.train_images, p.train_labels, p.test_images, p.test_labels)
                } else {
                    let need = |p: &Option<PathBuf>, name: &str| {
                        p.clone().ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "--{name} is required (or use --synth DIR / --config FILE)"
                            ))
                        })
                    };
                    (
                        need(&args.train_images, "train-images")?,
                        need(&args.train_labels, "train-labels")?,
                        need(&args.test_images, "test-images")?,
                        need(&args.test_labels, "test-labels")?,
                    )
                };
                let mut c = ExperimentConfig::with_data(paths.0, paths.1, paths.2, paths.3);
                c.train_size = args.train_size;
                c.test_size = args.test_size;
                c.full_split = args.full_split;
                c
            };
            if let Some(e) = args.epochs {
                config.train.epochs = e;
            }
            if let Some(lr) = args.lr {
                config.train.learning_rate = lr;
            }
            if let Some(b) = args.batch {
                config.train.batch = b;
            }
            config.seed = cli.seed;
            let output = run_experiment(&config)?;
            output.write(&cli.out)?;
            output.model.save(&cli.out.join("qnn_model.json"))?;
            print_json(&serde_json::to_value(&output.report)?);
        }
    }
    Ok(())
}
