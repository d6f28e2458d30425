//! The end-to-end binary-digit experiment: IDX ingestion, downscaling,
//! thresholding, contradiction removal, circuit encoding, training and
//! evaluation.

pub mod idx;
pub mod synthetic;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::pauli::Pauli;
use crate::core::state::StateVector;
use crate::error::{Error, Result};
use crate::qnn::{qnn_predict, train_sgd, EpochStats, QnnModel, TrainConfig};

pub use idx::{load_idx, read_idx_images, read_idx_labels, write_idx_images, write_idx_labels};
pub use synthetic::{synthesize_digits, write_synthetic_dataset, DatasetPaths};

/// A grayscale image with intensities normalized to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RawImage {
    pub width: usize,
    pub height: usize,
    pub intensities: Vec<f64>,
}

/// A 4×4 thresholded image: 16 pixels in {−1, +1} plus a ±1 class label
/// (+1 for digit 3, −1 for digit 6).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryExample {
    pub pixels: Vec<i8>,
    pub label: i8,
}

/// Keep only two digit classes, mapping `positive` → +1 and `negative` → −1.
pub fn filter_digits(
    data: &[(RawImage, u8)],
    positive: u8,
    negative: u8,
) -> Vec<(RawImage, i8)> {
    data.iter()
        .filter_map(|(im, d)| {
            if *d == positive {
                Some((im.clone(), 1i8))
            } else if *d == negative {
                Some((im.clone(), -1i8))
            } else {
                None
            }
        })
        .collect()
}

/// Downscale a 28×28 image to 4×4 by averaging each 7×7 block.
pub fn downscale_28_to_4(image: &RawImage) -> Result<Vec<f64>> {
    if image.width != 28 || image.height != 28 {
        return Err(Error::invalid(format!(
            "expected a 28×28 image, got {}×{}",
            image.width, image.height
        )));
    }
    let mut out = Vec::with_capacity(16);
    for by in 0..4 {
        for bx in 0..4 {
            let mut acc = 0.0;
            for dy in 0..7 {
                for dx in 0..7 {
                    acc += image.intensities[(by * 7 + dy) * 28 + (bx * 7 + dx)];
                }
            }
            out.push(acc / 49.0);
        }
    }
    Ok(out)
}

/// Downscale and binarize one image: intensity > threshold → +1, else −1.
pub fn binarize(image: &RawImage, threshold: f64) -> Result<Vec<i8>> {
    Ok(downscale_28_to_4(image)?
        .into_iter()
        .map(|v| if v > threshold { 1i8 } else { -1i8 })
        .collect())
}

/// Downscale, binarize, and drop contradictions: among examples that share
/// the same binary image, only the strict majority label survives; exact
/// ties drop the whole group.
pub fn preprocess(data: &[(RawImage, i8)], threshold: f64) -> Result<Vec<BinaryExample>> {
    let binarized = preprocess_keep_contradictions(data, threshold)?;
    let mut votes: std::collections::HashMap<&[i8], (i64, i64)> = std::collections::HashMap::new();
    for ex in &binarized {
        let v = votes.entry(&ex.pixels).or_insert((0, 0));
        if ex.label == 1 {
            v.0 += 1;
        } else {
            v.1 += 1;
        }
    }
    Ok(binarized
        .iter()
        .filter(|ex| {
            let (pos, neg) = votes[ex.pixels.as_slice()];
            if ex.label == 1 {
                pos > neg
            } else {
                neg > pos
            }
        })
        .cloned()
        .collect())
}

/// Downscale and binarize without the label-dependent deduplication;
/// evaluation data goes through this path.
pub fn preprocess_keep_contradictions(
    data: &[(RawImage, i8)],
    threshold: f64,
) -> Result<Vec<BinaryExample>> {
    data.iter()
        .map(|(im, label)| {
            Ok(BinaryExample {
                pixels: binarize(im, threshold)?,
                label: *label,
            })
        })
        .collect()
}

/// |z, 1⟩ over 17 qubits: data qubit j is |1⟩ iff pixel j = +1, and the
/// readout qubit is |1⟩.
pub fn example_to_state(ex: &BinaryExample) -> Result<StateVector> {
    if ex.pixels.len() != 16 {
        return Err(Error::invalid(format!(
            "expected 16 pixels, got {}",
            ex.pixels.len()
        )));
    }
    let mut bits: Vec<u8> = Vec::with_capacity(17);
    for &p in &ex.pixels {
        match p {
            1 => bits.push(1),
            -1 => bits.push(0),
            other => return Err(Error::invalid(format!("pixel must be ±1, got {other}"))),
        }
    }
    bits.push(1);
    StateVector::basis(17, &bits)
}

/// Everything one experiment run needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub train_images: PathBuf,
    pub train_labels: PathBuf,
    pub test_images: PathBuf,
    pub test_labels: PathBuf,
    /// Subsample sizes after preprocessing; ignored when `full_split`.
    pub train_size: usize,
    pub test_size: usize,
    pub full_split: bool,
    pub threshold: f64,
    /// Sweep letters (data qubit, readout) defining the layer layout.
    pub sweeps: Vec<(Pauli, Pauli)>,
    pub train: TrainConfig,
    /// Master seed; drives subsampling and overrides `train.seed`.
    pub seed: u64,
}

impl ExperimentConfig {
    /// Defaults for the 500/500 run; data paths must still be filled in.
    pub fn with_data(
        train_images: PathBuf,
        train_labels: PathBuf,
        test_images: PathBuf,
        test_labels: PathBuf,
    ) -> Self {
        ExperimentConfig {
            train_images,
            train_labels,
            test_images,
            test_labels,
            train_size: 500,
            test_size: 500,
            full_split: false,
            threshold: 0.5,
            sweeps: vec![(Pauli::X, Pauli::Y), (Pauli::Z, Pauli::X)],
            // the readout phase has period π in the pixel-weight sum, so
            // the step size has to stay well below π/(2·16)
            train: TrainConfig {
                learning_rate: 0.01,
                epochs: 3,
                batch: 4,
                ..TrainConfig::default()
            },
            seed: 7,
        }
    }
}

/// Result of one experiment run. `wall_time_s` is the only field that can
/// differ between reruns of the same config and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub train_size: usize,
    pub test_size: usize,
    pub epochs: u32,
    pub final_loss: f64,
    pub accuracy: f64,
    pub wall_time_s: f64,
}

/// Full output of [`run_experiment`]: the report, the per-epoch learning
/// curve, and the trained model.
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub curve: Vec<EpochStats>,
    pub model: QnnModel,
}

impl ExperimentOutput {
    /// Write `report.json` and `curve.csv` into the directory.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        fs::create_dir_all(out_dir)?;
        fs::write(
            out_dir.join("report.json"),
            serde_json::to_string_pretty(&self.report)?,
        )?;
        fs::write(out_dir.join("curve.csv"), curve_to_csv(&self.curve))?;
        Ok(())
    }
}

/// Render a learning curve as `epoch,mean_loss,accuracy` CSV.
pub fn curve_to_csv(curve: &[EpochStats]) -> String {
    let mut out = String::from("epoch,mean_loss,accuracy\n");
    for row in curve {
        out.push_str(&format!("{},{},{}\n", row.epoch, row.mean_loss, row.accuracy));
    }
    out
}

fn seeded_subsample<T: Clone>(items: &[T], size: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    order.truncate(size);
    order.into_iter().map(|i| items[i].clone()).collect()
}

/// Run the full 3-vs-6 experiment: load, filter, preprocess, subsample,
/// train, evaluate. Deterministic for a fixed config and seed in analytic
/// and finite-difference gradient modes (up to `wall_time_s`).
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if !config.full_split && (config.train_size == 0 || config.test_size == 0) {
        return Err(Error::invalid(
            "train_size and test_size must be ≥ 1 (or set full_split)",
        ));
    }
    for path in [
        &config.train_images,
        &config.train_labels,
        &config.test_images,
        &config.test_labels,
    ] {
        if !path.exists() {
            return Err(Error::invalid(format!("data file not found: {}", path.display())));
        }
    }

    let started = Instant::now();
    let train_raw = filter_digits(&load_idx(&config.train_images, &config.train_labels)?, 3, 6);
    let test_raw = filter_digits(&load_idx(&config.test_images, &config.test_labels)?, 3, 6);

    let train_all = preprocess(&train_raw, config.threshold)?;
    let test_all = preprocess_keep_contradictions(&test_raw, config.threshold)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (train_set, test_set) = if config.full_split {
        (train_all, test_all)
    } else {
        if train_all.len() < config.train_size {
            return Err(Error::invalid(format!(
                "only {} training examples survive preprocessing, need {}",
                train_all.len(),
                config.train_size
            )));
        }
        if test_all.len() < config.test_size {
            return Err(Error::invalid(format!(
                "only {} test examples available, need {}",
                test_all.len(),
                config.test_size
            )));
        }
        (
            seeded_subsample(&train_all, config.train_size, &mut rng),
            seeded_subsample(&test_all, config.test_size, &mut rng),
        )
    };

    let model = QnnModel::with_sweeps(16, &config.sweeps)?;
    let data: Vec<(Vec<i8>, i8)> = train_set
        .iter()
        .map(|ex| (ex.pixels.clone(), ex.label))
        .collect();
    let mut train_cfg = config.train.clone();
    train_cfg.seed = config.seed;
    let (trained, curve) = train_sgd(&model, &data, &train_cfg)?;

    let correct: usize = test_set
        .par_iter()
        .map(|ex| {
            qnn_predict(&trained, &ex.pixels).map(|p| usize::from(p == ex.label))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let accuracy = correct as f64 / test_set.len() as f64;

    let report = ExperimentReport {
        train_size: data.len(),
        test_size: test_set.len(),
        epochs: train_cfg.epochs,
        final_loss: curve.last().map_or(f64::NAN, |s| s.mean_loss),
        accuracy,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput {
        report,
        curve,
        model: trained,
    })
}
