//! The image-classification pipeline end to end on a small synthetic split:
//! IDX files → downscale → threshold → contradiction removal → 17-qubit
//! encoding → SGD training → evaluation.
//!
//! The full-size pinned run (500/500) is the `mnist` CLI subcommand; this
//! example keeps the sizes small so it finishes in well under a minute.
//!
//! ```bash
//! cargo run --release --example image_pipeline
//! ```

use qmlsim::pipeline::{run_experiment, write_synthetic_dataset, ExperimentConfig};

fn main() -> qmlsim::Result<()> {
    let dir = std::env::temp_dir().join("qmlsim_image_pipeline");
    let paths = write_synthetic_dataset(&dir, 200, 200, 123)?;
    println!("synthetic IDX dataset written under {}", dir.display());

    let mut config = ExperimentConfig::with_data(
        paths.train_images,
        paths.train_labels,
        paths.test_images,
        paths.test_labels,
    );
    config.train_size = 80;
    config.test_size = 80;
    config.train.epochs = 2;

    let output = run_experiment(&config)?;
    println!("\nepoch  mean loss  running accuracy");
    for row in &output.curve {
        println!("{:5}  {:.4}     {:.3}", row.epoch, row.mean_loss, row.accuracy);
    }
    println!(
        "\ntest accuracy {:.3} on {} examples ({} parameters, {:.1}s)",
        output.report.accuracy,
        output.report.test_size,
        output.model.num_params(),
        output.report.wall_time_s
    );

    let out_dir = dir.join("results");
    output.write(&out_dir)?;
    println!("report.json and curve.csv written under {}", out_dir.display());
    Ok(())
}
