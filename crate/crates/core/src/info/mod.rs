//! Entropy, free-energy and state calculus.

pub mod dist;
pub mod engine;
pub mod random;
pub mod state;
pub mod thermal;

pub use dist::{
    binary_entropy, bits_to_nats, conditional_entropy, information_content, mutual_information_classical,
    mutual_information_forms, nats_to_bits, shannon_entropy, JointDist, ProbDist,
};
pub use engine::{engine_efficiency, EngineReport};
pub use state::{
    kron, mutual_information_quantum, observational_entropy, relative_entropy, von_neumann_entropy, CMatrix,
    CoarseGraining, DensityMatrix,
};
pub use thermal::{
    average_energy, equilibrium_free_energy, gibbs_distribution, gibbs_state, gibbs_state_matrix,
    ln_partition_function, noneq_free_energy, partition_function, thermal_entropy, InverseTemperature,
    SpectrumModel,
};
