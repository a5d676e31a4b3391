//! System–environment–memory–work-reservoir entropy chain.
//!
//! For a unitary, energy-conserving evolution of S ⊗ E ⊗ M ⊗ W from a product state with
//! E thermal, a cycle that leaves S and the (pure) work reservoir unchanged obeys
//! ΔS_M ≥ −βQ_E. The slack equals the total correlation created plus S(σ_E‖γ_E).

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::info::state::{check_unitary, kron, CMatrix};
use crate::info::{gibbs_state_matrix, relative_entropy, von_neumann_entropy, DensityMatrix, InverseTemperature};

pub const SUBSYSTEMS: [&str; 4] = ["S", "E", "M", "W"];
pub const CONSERVATION_TOL: f64 = 1e-8;

/// Hamiltonians and initial states for S, E, M, W (in that tensor order) plus the joint unitary.
#[derive(Debug, Clone)]
pub struct SemwSetup {
    pub hamiltonians: [CMatrix; 4],
    pub states: [DensityMatrix; 4],
    pub beta: InverseTemperature,
    pub unitary: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemwLedger {
    pub delta_s: [f64; 4],
    /// Energy gained by the environment.
    pub heat_to_env: f64,
    /// ΔS_M + βQ_E.
    pub slack: f64,
    /// Σ S(σ_k) − S(σ), the total correlation of the final state.
    pub total_correlation: f64,
    pub rel_entropy_env: f64,
    /// |slack − total_correlation − rel_entropy_env|, using ΔS_S = ΔS_W = 0.
    pub residual: f64,
}

fn subsystem_err(k: usize, detail: String) -> CoreError {
    CoreError::Subsystem { subsystem: SUBSYSTEMS[k].into(), detail }
}

fn embed(dims: &[usize; 4], k: usize, op: &CMatrix) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for (j, &d) in dims.iter().enumerate() {
        let factor = if j == k { op.clone() } else { CMatrix::identity(d, d) };
        out = kron(&out, &factor);
    }
    out
}

/// Verify the memory-entropy bound for one cycle, checking every precondition and naming
/// the subsystem that breaks it.
pub fn semw_cycle_check(setup: &SemwSetup) -> Result<SemwLedger> {
    let beta = setup.beta.value();
    if !setup.beta.is_finite() {
        return Err(subsystem_err(1, "environment temperature must be positive".into()));
    }
    let dims = [0, 1, 2, 3].map(|k| setup.states[k].dim());
    for k in 0..4 {
        let h = &setup.hamiltonians[k];
        if h.nrows() != dims[k] || h.ncols() != dims[k] {
            return Err(subsystem_err(k, format!("Hamiltonian is {}x{}, state has dimension {}", h.nrows(), h.ncols(), dims[k])));
        }
    }
    let total: usize = dims.iter().product();
    if setup.unitary.nrows() != total || setup.unitary.ncols() != total {
        return Err(CoreError::Shape { expected: format!("{total}x{total} unitary"), found: format!("{}x{}", setup.unitary.nrows(), setup.unitary.ncols()) });
    }
    check_unitary(&setup.unitary)?;

    let gamma_e = gibbs_state_matrix(&setup.hamiltonians[1], setup.beta)?;
    let thermal_gap = setup.states[1].trace_distance(&gamma_e);
    if thermal_gap > CONSERVATION_TOL {
        return Err(subsystem_err(1, format!("environment not thermal (trace distance {thermal_gap:.3e})")));
    }
    let s_w0 = von_neumann_entropy(&setup.states[3]);
    if s_w0 > CONSERVATION_TOL {
        return Err(subsystem_err(3, format!("work reservoir not pure initially (S = {s_w0:.3e})")));
    }

    let h_total = (0..4).fold(CMatrix::zeros(total, total), |acc, k| acc + embed(&dims, k, &setup.hamiltonians[k]));
    let comm = &setup.unitary * &h_total - &h_total * &setup.unitary;
    let comm_norm = comm.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if comm_norm > CONSERVATION_TOL {
        return Err(CoreError::Subsystem { subsystem: "SEMW".into(), detail: format!("unitary does not conserve total energy (|[U,H]| = {comm_norm:.3e})") });
    }

    let initial = setup.states[0].tensor(&setup.states[1]).tensor(&setup.states[2]).tensor(&setup.states[3]);
    let sigma = initial.evolve(&setup.unitary)?;
    let finals: Vec<DensityMatrix> = (0..4).map(|k| sigma.partial_trace(&dims, &[k])).collect::<Result<_>>()?;
    let delta_s = [0, 1, 2, 3].map(|k| von_neumann_entropy(&finals[k]) - von_neumann_entropy(&setup.states[k]));

    if delta_s[0].abs() > CONSERVATION_TOL {
        return Err(subsystem_err(0, format!("system entropy changed by {:.3e}", delta_s[0])));
    }
    let s_w1 = von_neumann_entropy(&finals[3]);
    if s_w1 > CONSERVATION_TOL {
        return Err(subsystem_err(3, format!("work reservoir not pure after the cycle (S = {s_w1:.3e})")));
    }

    let heat_to_env = finals[1].expectation(&setup.hamiltonians[1]) - setup.states[1].expectation(&setup.hamiltonians[1]);
    let slack = delta_s[2] + beta * heat_to_env;
    let total_correlation = finals.iter().map(von_neumann_entropy).sum::<f64>() - von_neumann_entropy(&sigma);
    let rel_entropy_env = relative_entropy(&finals[1], &gamma_e)?;
    let residual = (slack - total_correlation - rel_entropy_env).abs();
    if slack < -1e-9 {
        return crate::error::invariant(format!("memory entropy bound violated: ΔS_M + βQ_E = {slack:.3e}"));
    }
    Ok(SemwLedger { delta_s, heat_to_env, slack, total_correlation, rel_entropy_env, residual })
}
