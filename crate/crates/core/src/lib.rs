//! Three-flavor neutrino oscillations treated as a three-qubit system.
//!
//! The flavor modes e, μ, τ are mapped to qubits A, B, C by occupation number,
//! so a single neutrino is the one-excitation state
//! `a_e|100⟩ + a_μ|010⟩ + a_τ|001⟩`. On top of that state this crate computes
//! Bell-CHSH values, first-order coherence, (intrinsic) concurrence and the
//! relative entropy of coherence, and checks the trade-off relations that tie
//! them together along an L/E sweep.
//!
//! Module layout, bottom-up:
//!
//! - [`linalg`]: small dense complex matrices, Pauli basis, Hermitian eigenvalues.
//! - [`density`]: validated density matrices, partial trace, von Neumann entropy.
//! - [`oscillation`]: PMNS matrix, flavor amplitudes and probabilities.
//! - [`flavor_state`]: the tripartite state and its reductions.
//! - [`measures`]: resource measures evaluated on those states.
//! - [`closed_form`]: the same measures written directly in terms of probabilities.
//! - [`tradeoff`]: per-point evaluation of the trade-off relations.
//! - [`sweep`]: configuration, sweep driver, CSV output and verification.

pub mod closed_form;
pub mod density;
pub mod error;
pub mod flavor_state;
pub mod linalg;
pub mod measures;
pub mod oscillation;
pub mod sweep;
pub mod tradeoff;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Pauli};
pub use oscillation::{BaselinePoint, Flavor, FlavorAmplitudes, LoeUnit, OscillationParams};
pub use tradeoff::TradeoffReport;
