//! Numerical thermodynamics of information.
//!
//! The crate is organised by subsystem:
//!
//! - [`info`]: classical and quantum entropy calculus, Gibbs states, free energies.
//! - [`landauer`]: exact heat bookkeeping for unitary system–bath erasure and the
//!   zero-temperature, finite-time, finite-size and single-shot refinements of the bound.
//! - [`szilard`]: exact classical and quantum Szilard engines with particle statistics.
//! - [`stochastic`]: overdamped Langevin trajectories, double-well erasure, Jarzynski checks.
//! - [`feedback`]: measurement/feedback work ledgers, an information ratchet and the
//!   gambling demon with stopping times.
//!
//! Natural units throughout: ħ = k_B = 1, entropies in nats.

pub mod error;
pub mod feedback;
pub mod info;
pub mod landauer;
pub mod numeric;
pub mod rng;
pub mod stochastic;
pub mod szilard;

pub use error::{CoreError, Result};
