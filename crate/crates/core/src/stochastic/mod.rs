//! Overdamped Langevin dynamics in time-dependent potentials.
//!
//! Units: lengths in well separations, energies in kT, time in γ·x_m²/kT. Work is the energy
//! injected by moving the protocol at fixed position; heat is the energy change from moving
//! the particle at fixed protocol, so the first law holds exactly per step.

pub mod dump;
mod erasure;
mod jarzynski;
mod langevin;
mod potential;

pub use erasure::{dt_halving_check, erasure_experiment, fit_finite_time, q_of_r, ErasureOutcome, ErasureProtocol, FiniteTimeFit, MIN_TRAJECTORIES};
pub use jarzynski::{harmonic_delta_f, jarzynski_check, JarzynskiReport};
pub use langevin::{
    dissipated_heat, first_law_defect, integrate, midpoint_heat, sample_equilibrium, simulate, simulate_indexed, summarize_indexed, trajectory_heat,
    trajectory_work, InitialCondition, LangevinParams, PathSummary, Trajectory, STABILITY_LIMIT,
};
pub use potential::{PotentialSpec, Schedule};
