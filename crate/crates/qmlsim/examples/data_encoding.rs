//! The three data encodings side by side: basis bits, normalized
//! amplitudes, and per-feature rotation angles.
//!
//! ```bash
//! cargo run --release --example data_encoding
//! ```

use qmlsim::encode::{encode_amplitude, encode_angle, encode_basis, feature_density, EncodingSpec};

fn main() -> qmlsim::Result<()> {
    let bits = [1u8, 0, 1];
    let basis = encode_basis(&bits)?;
    let index = basis
        .amplitudes()
        .iter()
        .position(|a| a.norm() > 0.0)
        .unwrap();
    println!("basis encode {bits:?} → |{index}⟩ on {} qubits", basis.num_qubits());

    let x = [3.0, 4.0, 0.0];
    let amp = encode_amplitude(&x)?;
    println!(
        "amplitude encode {x:?} → {:?} (padded to {} amplitudes)",
        amp.amplitudes()
            .iter()
            .map(|a| (a.re * 1000.0).round() / 1000.0)
            .collect::<Vec<_>>(),
        amp.dim()
    );

    let angles = [0.4, 1.1];
    let rot = encode_angle(&angles)?;
    println!("angle encode {angles:?} →");
    for (idx, a) in rot.amplitudes().iter().enumerate() {
        println!("  |{idx:02b}⟩  {:+.4}{:+.4}i", a.re, a.im);
    }

    // the induced feature density ρ(x) = |φ(x)⟩⟨φ(x)|
    let spec = EncodingSpec::angle(2)?;
    let rho = feature_density(&angles, &spec)?;
    println!(
        "feature density: trace = {:.6}, purity = {:.6}",
        rho.trace().re,
        rho.purity()
    );
    Ok(())
}
