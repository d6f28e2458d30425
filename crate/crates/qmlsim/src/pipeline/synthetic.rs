//! Deterministic synthetic handwritten-style digit images (3s and 6s).
//!
//! The tests, examples and CLI need MNIST-shaped data without shipping or
//! downloading MNIST itself. Each digit is a couple of jittered arc strokes
//! rasterized onto a 28×28 canvas; a fixed seed reproduces the exact same
//! dataset bytes everywhere.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::pipeline::idx::{write_idx_images, write_idx_labels};
use crate::pipeline::RawImage;

const SIZE: usize = 28;

struct Jitter {
    rot: f64,
    scale: f64,
    dx: f64,
    dy: f64,
    thickness: f64,
}

/// One arc stroke: center, radius, angle range (radians, y axis points
/// down so angles grow clockwise on screen).
struct Arc {
    cx: f64,
    cy: f64,
    r: f64,
    a0: f64,
    a1: f64,
}

fn deg(d: f64) -> f64 {
    d.to_radians()
}

fn digit_three(rng: &mut ChaCha8Rng) -> Vec<Arc> {
    let j = |rng: &mut ChaCha8Rng, s: f64| rng.gen_range(-s..s);
    vec![
        // top-right bump
        Arc {
            cx: 11.5 + j(rng, 0.8),
            cy: 9.0 + j(rng, 0.7),
            r: 4.3 + j(rng, 0.5),
            a0: deg(-95.0 + j(rng, 8.0)),
            a1: deg(100.0 + j(rng, 8.0)),
        },
        // bottom-right bump
        Arc {
            cx: 11.5 + j(rng, 0.8),
            cy: 18.0 + j(rng, 0.7),
            r: 4.9 + j(rng, 0.5),
            a0: deg(-100.0 + j(rng, 8.0)),
            a1: deg(115.0 + j(rng, 8.0)),
        },
    ]
}

fn digit_six(rng: &mut ChaCha8Rng) -> Vec<Arc> {
    let j = |rng: &mut ChaCha8Rng, s: f64| rng.gen_range(-s..s);
    vec![
        // closed lower loop
        Arc {
            cx: 13.0 + j(rng, 0.8),
            cy: 17.5 + j(rng, 0.7),
            r: 4.4 + j(rng, 0.5),
            a0: 0.0,
            a1: deg(360.0),
        },
        // stem curving up to the top right
        Arc {
            cx: 20.0 + j(rng, 1.0),
            cy: 16.0 + j(rng, 0.8),
            r: 10.0 + j(rng, 0.8),
            a0: deg(192.0 + j(rng, 6.0)),
            a1: deg(255.0 + j(rng, 6.0)),
        },
    ]
}

fn render(arcs: &[Arc], jitter: &Jitter) -> RawImage {
    let mut canvas = vec![0.0f64; SIZE * SIZE];
    let (cx0, cy0) = (14.0, 14.0);
    let (sin_r, cos_r) = jitter.rot.sin_cos();
    for arc in arcs {
        let steps = ((arc.a1 - arc.a0).abs() * arc.r * 4.0).ceil().max(24.0) as usize;
        for s in 0..=steps {
            let a = arc.a0 + (arc.a1 - arc.a0) * s as f64 / steps as f64;
            let px = arc.cx + arc.r * a.cos();
            let py = arc.cy + arc.r * a.sin();
            // affine jitter about the canvas center
            let (rx, ry) = (px - cx0, py - cy0);
            let x = cx0 + jitter.scale * (cos_r * rx - sin_r * ry) + jitter.dx;
            let y = cy0 + jitter.scale * (sin_r * rx + cos_r * ry) + jitter.dy;
            stamp(&mut canvas, x, y, jitter.thickness);
        }
    }
    RawImage {
        width: SIZE,
        height: SIZE,
        intensities: canvas,
    }
}

/// Soft disk of the given radius; intensities combine by max so strokes
/// stay saturated where they overlap.
fn stamp(canvas: &mut [f64], x: f64, y: f64, radius: f64) {
    let lo_x = (x - radius - 1.0).floor().max(0.0) as usize;
    let hi_x = (x + radius + 1.0).ceil().min((SIZE - 1) as f64) as usize;
    let lo_y = (y - radius - 1.0).floor().max(0.0) as usize;
    let hi_y = (y + radius + 1.0).ceil().min((SIZE - 1) as f64) as usize;
    for py in lo_y..=hi_y {
        for px in lo_x..=hi_x {
            let d = ((px as f64 - x).powi(2) + (py as f64 - y).powi(2)).sqrt();
            let v = (1.2 * (radius - d) + 0.6).clamp(0.0, 1.0);
            let cell = &mut canvas[py * SIZE + px];
            *cell = cell.max(v);
        }
    }
}

/// Generate `count` images alternating between digit 3 and digit 6, with
/// per-sample jitter drawn from the seeded generator.
pub fn synthesize_digits(count: usize, seed: u64) -> Vec<(RawImage, u8)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let jitter = Jitter {
            rot: rng.gen_range(-0.22..0.22),
            scale: rng.gen_range(0.88..1.12),
            dx: rng.gen_range(-2.2..2.2),
            dy: rng.gen_range(-2.2..2.2),
            thickness: rng.gen_range(1.9..3.1),
        };
        let (arcs, label) = if i % 2 == 0 {
            (digit_three(&mut rng), 3u8)
        } else {
            (digit_six(&mut rng), 6u8)
        };
        out.push((render(&arcs, &jitter), label));
    }
    out
}

/// Paths of a dataset written by [`write_synthetic_dataset`].
pub struct DatasetPaths {
    pub train_images: PathBuf,
    pub train_labels: PathBuf,
    pub test_images: PathBuf,
    pub test_labels: PathBuf,
}

/// Write a train/test split of synthetic digits in MNIST's file layout.
pub fn write_synthetic_dataset(
    dir: &Path,
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> Result<DatasetPaths> {
    std::fs::create_dir_all(dir)?;
    let train = synthesize_digits(n_train, seed);
    let test = synthesize_digits(n_test, seed.wrapping_add(0x5EED));
    let paths = DatasetPaths {
        train_images: dir.join("train-images-idx3-ubyte"),
        train_labels: dir.join("train-labels-idx1-ubyte"),
        test_images: dir.join("t10k-images-idx3-ubyte"),
        test_labels: dir.join("t10k-labels-idx1-ubyte"),
    };
    write_idx_images(
        &paths.train_images,
        &train.iter().map(|(im, _)| im.clone()).collect::<Vec<_>>(),
    )?;
    write_idx_labels(
        &paths.train_labels,
        &train.iter().map(|(_, l)| *l).collect::<Vec<_>>(),
    )?;
    write_idx_images(
        &paths.test_images,
        &test.iter().map(|(im, _)| im.clone()).collect::<Vec<_>>(),
    )?;
    write_idx_labels(
        &paths.test_labels,
        &test.iter().map(|(_, l)| *l).collect::<Vec<_>>(),
    )?;
    Ok(paths)
}
