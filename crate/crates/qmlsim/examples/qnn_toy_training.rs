//! Train the variational classifier on a tiny hand-made pattern task and
//! watch the loss fall.
//!
//! ```bash
//! cargo run --release --example qnn_toy_training
//! ```

use qmlsim::qnn::{qnn_forward, qnn_predict, train_sgd, QnnModel, TrainConfig};

fn main() -> qmlsim::Result<()> {
    // label +1 when the majority of the 3 inputs is lit
    let data: Vec<(Vec<i8>, i8)> = vec![
        (vec![1, 1, 1], 1),
        (vec![1, 1, -1], 1),
        (vec![1, -1, 1], 1),
        (vec![-1, 1, 1], 1),
        (vec![-1, -1, -1], -1),
        (vec![-1, -1, 1], -1),
        (vec![-1, 1, -1], -1),
        (vec![1, -1, -1], -1),
    ];

    let model = QnnModel::two_sweep(3)?;
    let cfg = TrainConfig {
        learning_rate: 0.05,
        epochs: 30,
        batch: 4,
        seed: 1,
        ..TrainConfig::default()
    };
    let (trained, history) = train_sgd(&model, &data, &cfg)?;

    println!("epoch  mean loss  running accuracy");
    for row in history.iter().step_by(3) {
        println!("{:5}  {:.4}     {:.3}", row.epoch, row.mean_loss, row.accuracy);
    }

    println!("\ntrained parameters: {:?}", trained
        .theta()
        .iter()
        .map(|t| (t * 1000.0).round() / 1000.0)
        .collect::<Vec<_>>());

    println!("\ninput          ⟨Y⟩       predicted  true");
    let mut correct = 0;
    for (z, label) in &data {
        let f = qnn_forward(&trained, z)?;
        let pred = qnn_predict(&trained, z)?;
        correct += i32::from(pred == *label);
        println!("{z:?}  {f:+.4}   {pred:+}         {label:+}");
    }
    println!("\ntraining accuracy: {}/{}", correct, data.len());
    Ok(())
}
