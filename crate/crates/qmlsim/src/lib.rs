//! Desk-scale statevector simulation toolkit for quantum machine learning.
//!
//! The crate covers the full path from classical data to trained quantum
//! models, entirely on a dense simulator:
//!
//! - [`core`]: statevectors, density matrices, gates, circuits, measurement
//! - [`encode`]: basis, amplitude and angle data encodings
//! - [`kernel`]: quantum kernels, Gram matrices, kernel ridge regression and
//!   measurement-operator expansions
//! - [`evolve`]: Hamiltonian evolution (exact and Trotterized), the quantum
//!   Fourier transform, and Markov-chain iteration for side-by-side
//!   unitary/stochastic comparisons
//! - [`algos`]: Grover search and Grover-based minimum finding
//! - [`qnn`]: a variational classifier with analytic, finite-difference and
//!   Hadamard-test gradients, trained by SGD
//! - [`regress`]: pseudo-inverse linear regression and Gaussian-process
//!   prediction
//! - [`pipeline`]: the IDX image pipeline (load, downscale, binarize,
//!   deduplicate) and the end-to-end binary-digit experiment
//!
//! Everything is deterministic under explicit seeds; there is no global RNG
//! state. See the `examples/` directory for one runnable program per major
//! capability.

pub mod algos;
pub mod core;
pub mod encode;
pub mod error;
pub mod evolve;
pub mod kernel;
pub mod pipeline;
pub mod qnn;
pub mod regress;

pub use error::{Error, Result};
