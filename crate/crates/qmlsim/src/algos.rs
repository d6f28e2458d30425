//! Grover search over a marked index and Grover-driven minimization of a
//! precomputed loss table (threshold descent with exponential guessing).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::measure::{cumulative, sample_index};
use crate::error::{Error, Result};

/// A search problem: one marked index in a power-of-two domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleSpec {
    domain_size: usize,
    marked: usize,
}

impl OracleSpec {
    pub fn new(domain_size: usize, marked: usize) -> Result<Self> {
        if domain_size < 2 || !domain_size.is_power_of_two() {
            return Err(Error::invalid(format!(
                "domain size must be a power of two ≥ 2, got {domain_size}"
            )));
        }
        if marked >= domain_size {
            return Err(Error::invalid(format!(
                "marked index {marked} out of range for domain {domain_size}"
            )));
        }
        Ok(OracleSpec {
            domain_size,
            marked,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    /// The standard iteration count ⌊(π/4)·√N⌋.
    pub fn default_iterations(&self) -> u32 {
        ((std::f64::consts::FRAC_PI_4) * (self.domain_size as f64).sqrt()).floor() as u32
    }
}

/// Result of a Grover run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GroverOutcome {
    /// Index sampled from the final statevector.
    pub index: usize,
    /// Exact probability mass on the marked index after the iterations.
    pub success_probability: f64,
    /// Iterations actually performed.
    pub iterations: u32,
}

/// Run `k` Grover iterations (oracle phase flip + inversion about the mean)
/// on the uniform superposition, by direct statevector simulation over real
/// amplitudes. Returns a sampled index and the exact success probability,
/// which equals sin²((2k+1)·arcsin(1/√N)).
pub fn grover_search(oracle: &OracleSpec, iterations: Option<u32>, seed: u64) -> Result<GroverOutcome> {
    let k = iterations.unwrap_or_else(|| oracle.default_iterations());
    let amps = grover_amplitudes(oracle.domain_size, &[oracle.marked], k);
    let pmf: Vec<f64> = amps.iter().map(|a| a * a).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = sample_index(&cumulative(&pmf), &mut rng);
    Ok(GroverOutcome {
        index,
        success_probability: pmf[oracle.marked],
        iterations: k,
    })
}

/// Closed-form success probability sin²((2k+1)·arcsin(√(m/N))) for m marked
/// items out of N after k iterations.
pub fn grover_success_probability(n: usize, m: usize, k: u32) -> f64 {
    let theta = ((m as f64 / n as f64).sqrt()).asin();
    ((2.0 * k as f64 + 1.0) * theta).sin().powi(2)
}

/// Grover iterations stay in the span of the marked and unmarked uniform
/// vectors, so amplitudes are real; the full vector is still simulated so
/// the two-dimensional invariant is observable, not assumed.
fn grover_amplitudes(n: usize, marked: &[usize], iterations: u32) -> Vec<f64> {
    let mut amps = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..iterations {
        for &m in marked {
            amps[m] = -amps[m];
        }
        let mean = amps.iter().sum::<f64>() / n as f64;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    amps
}

/// A minimization problem over a finite candidate set: per-candidate losses
/// Σ_x f(x, y) + λ·φ(y), precomputed classically.
#[derive(Debug, Clone, PartialEq)]
pub struct MapObjective {
    losses: Vec<f64>,
    lambda: f64,
}

impl MapObjective {
    /// Wrap an already-assembled loss table.
    pub fn new(losses: Vec<f64>, lambda: f64) -> Result<Self> {
        if losses.is_empty() {
            return Err(Error::invalid("loss table must be nonempty"));
        }
        if losses.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("loss table entries must be finite"));
        }
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::invalid("lambda must be finite and ≥ 0"));
        }
        Ok(MapObjective { losses, lambda })
    }

    /// Assemble the table from per-candidate empirical losses and a penalty:
    /// losses[y] = empirical[y] + λ·penalty[y].
    pub fn from_parts(empirical: &[f64], penalty: &[f64], lambda: f64) -> Result<Self> {
        if empirical.len() != penalty.len() {
            return Err(Error::invalid("empirical and penalty tables differ in length"));
        }
        let losses = empirical
            .iter()
            .zip(penalty)
            .map(|(e, p)| e + lambda * p)
            .collect();
        Self::new(losses, lambda)
    }

    pub fn candidate_count(&self) -> usize {
        self.losses.len()
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Dürr–Høyer-style threshold descent: repeatedly Grover-search the set
/// {y : loss(y) < threshold} with the iteration count guessed exponentially
/// (the marked count is never read by the search itself), accept sampled
/// improvements, and stop after `budget` rounds or when no candidate can
/// improve. The returned value is never worse than the initial random draw;
/// ties on the minimum value resolve to the lowest index.
pub fn minimize_map(obj: &MapObjective, seed: u64, budget: u32) -> Result<(usize, f64)> {
    if budget == 0 {
        return Err(Error::invalid("budget must be ≥ 1"));
    }
    let len = obj.losses.len();
    let n = len.next_power_of_two().max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best = rng.gen_range(0..len);
    let mut best_loss = obj.losses[best];

    // Boyer-et-al. exponential guessing of the iteration count
    let mut guess = 1.0f64;
    let growth = 6.0 / 5.0;
    let max_guess = (n as f64).sqrt();

    for _ in 0..budget {
        let marked: Vec<usize> = (0..len).filter(|&y| obj.losses[y] < best_loss).collect();
        if marked.is_empty() {
            break; // best_loss is already the minimum value
        }
        let k = rng.gen_range(0..guess.ceil() as u64) as u32;
        let amps = grover_amplitudes(n, &marked, k);
        let pmf: Vec<f64> = amps.iter().map(|a| a * a).collect();
        let idx = sample_index(&cumulative(&pmf), &mut rng);
        if idx < len && obj.losses[idx] < best_loss {
            best = idx;
            best_loss = obj.losses[idx];
            guess = 1.0;
        } else {
            guess = (guess * growth).min(max_guess);
        }
    }

    // deterministic tie-break: lowest index achieving the found value
    let lowest = obj
        .losses
        .iter()
        .position(|&v| v == best_loss)
        .unwrap_or(best);
    Ok((lowest, best_loss))
}
