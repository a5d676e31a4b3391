//! Exact heat bookkeeping for unitary system–bath processes and the refinements of
//! Landauer's bound.

mod bounds;
mod semw;

pub use bounds::{
    distillation_erasure_cost, finite_size_bounds, finite_time_bound, single_shot_battery_bound, zero_temperature_bound,
    AlphaModel, FiniteSizeBounds, HeatCapacityModel, SingleShotBound, ZeroTemperatureBound, PLANCKIAN_ALPHA,
};
pub use semw::{semw_cycle_check, SemwLedger, SemwSetup};

use serde::{Deserialize, Serialize};

use crate::error::{invariant, CoreError, Result};
use crate::info::state::{check_unitary, CMatrix};
use crate::info::{gibbs_state_matrix, mutual_information_quantum, relative_entropy, von_neumann_entropy, DensityMatrix, InverseTemperature};

pub const MAX_BATH_DIM: usize = 64;
pub const EQUALITY_TOL: f64 = 1e-9;

/// A system state, a bath Hamiltonian at inverse temperature β, and a joint unitary
/// acting on system ⊗ bath.
#[derive(Debug, Clone)]
pub struct ErasureSetup {
    system_state: DensityMatrix,
    bath_hamiltonian: CMatrix,
    beta: InverseTemperature,
    joint_unitary: CMatrix,
}

impl ErasureSetup {
    pub fn new(system_state: DensityMatrix, bath_hamiltonian: CMatrix, beta: InverseTemperature, joint_unitary: CMatrix) -> Result<Self> {
        let db = bath_hamiltonian.nrows();
        if db == 0 || bath_hamiltonian.ncols() != db {
            return Err(CoreError::Shape { expected: "square bath Hamiltonian".into(), found: format!("{}x{}", db, bath_hamiltonian.ncols()) });
        }
        if db > MAX_BATH_DIM {
            return Err(CoreError::Shape { expected: format!("bath dimension ≤ {MAX_BATH_DIM}"), found: db.to_string() });
        }
        if !beta.is_finite() {
            return crate::error::domain("bath temperature must be positive");
        }
        let d = system_state.dim() * db;
        if joint_unitary.nrows() != d || joint_unitary.ncols() != d {
            return Err(CoreError::Shape {
                expected: format!("{d}x{d} joint unitary"),
                found: format!("{}x{}", joint_unitary.nrows(), joint_unitary.ncols()),
            });
        }
        check_unitary(&joint_unitary)?;
        Ok(Self { system_state, bath_hamiltonian, beta, joint_unitary })
    }

    pub fn beta(&self) -> InverseTemperature {
        self.beta
    }
}

/// Entropy and heat bookkeeping for one system–bath process. Entropies in nats,
/// heat in energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub delta_s_system: f64,
    pub delta_s_bath: f64,
    pub heat_to_bath: f64,
    pub mutual_info: f64,
    pub rel_entropy_bath: f64,
    /// βΔQ_B + ΔS_S.
    pub entropy_production: f64,
    /// |βΔQ_B + ΔS_S − I − S(σ_B‖γ_B)|.
    pub residual: f64,
}

impl Ledger {
    pub const CSV_HEADER: &'static str = "delta_s_system,heat_to_bath,mutual_info,rel_entropy_bath,entropy_production,residual";

    pub fn csv_row(&self) -> String {
        [self.delta_s_system, self.heat_to_bath, self.mutual_info, self.rel_entropy_bath, self.entropy_production, self.residual]
            .iter()
            .map(|x| crate::numeric::format_float(*x))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// βΔQ_B + ΔS_S, the slack in Landauer's bound.
    pub fn landauer_margin(&self) -> f64 {
        self.entropy_production
    }
}

/// Evolve ρ_S ⊗ γ_B under the joint unitary and fill every ledger entry from the exact
/// final state. Fails if the heat equality or Landauer's bound is violated beyond 1e-9.
pub fn run_erasure(setup: &ErasureSetup) -> Result<Ledger> {
    let beta = setup.beta.value();
    let ds = setup.system_state.dim();
    let db = setup.bath_hamiltonian.nrows();
    let gamma = gibbs_state_matrix(&setup.bath_hamiltonian, setup.beta)?;
    let initial = setup.system_state.tensor(&gamma);
    let sigma = initial.evolve(&setup.joint_unitary)?;
    let sigma_s = sigma.partial_trace(&[ds, db], &[0])?;
    let sigma_b = sigma.partial_trace(&[ds, db], &[1])?;

    let delta_s_system = von_neumann_entropy(&sigma_s) - von_neumann_entropy(&setup.system_state);
    let delta_s_bath = von_neumann_entropy(&sigma_b) - von_neumann_entropy(&gamma);
    let heat_to_bath = sigma_b.expectation(&setup.bath_hamiltonian) - gamma.expectation(&setup.bath_hamiltonian);
    let mutual_info = mutual_information_quantum(&sigma, (ds, db))?;
    let rel_entropy_bath = relative_entropy(&sigma_b, &gamma)?;
    let entropy_production = beta * heat_to_bath + delta_s_system;
    let residual = (entropy_production - mutual_info - rel_entropy_bath).abs();

    let ledger = Ledger {
        delta_s_system,
        delta_s_bath,
        heat_to_bath,
        mutual_info,
        rel_entropy_bath,
        entropy_production,
        residual,
    };
    if !(residual <= EQUALITY_TOL) {
        return invariant(format!("heat equality residual {residual:.3e} exceeds {EQUALITY_TOL:.0e}"));
    }
    if entropy_production < -EQUALITY_TOL {
        return invariant(format!("Landauer bound violated: βΔQ_B + ΔS_S = {entropy_production:.3e}"));
    }
    Ok(ledger)
}

/// Heat dumped by swapping a maximally mixed qubit with a thermal bath qubit of gap E.
pub fn swap_erasure_cost(gap_e: f64, beta: InverseTemperature) -> Result<f64> {
    if !(gap_e >= 0.0) {
        return crate::error::domain(format!("gap must be non-negative, got {gap_e}"));
    }
    let excited = if beta.is_finite() {
        let boltz = (-beta.value() * gap_e).exp();
        boltz / (1.0 + boltz)
    } else {
        0.0
    };
    Ok((0.5 - excited) * gap_e)
}

/// −ΔS_S/β, the least heat that can accompany a system entropy change ΔS_S.
pub fn landauer_minimum(delta_s_system: f64, beta: InverseTemperature) -> f64 {
    -delta_s_system / beta.value()
}

/// SWAP on two qudits of equal dimension `d`.
pub fn swap_unitary(d: usize) -> CMatrix {
    let mut u = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(i * d + j, j * d + i)] = num_complex::Complex64::new(1.0, 0.0);
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::random::{haar_unitary, random_state};
    use crate::info::SpectrumModel;
    use crate::rng::stream;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn beta(b: f64) -> InverseTemperature {
        InverseTemperature::new(b).unwrap()
    }

    fn swap_setup(gap: f64, b: f64) -> ErasureSetup {
        ErasureSetup::new(DensityMatrix::maximally_mixed(2), SpectrumModel::qubit(gap).unwrap().matrix(), beta(b), swap_unitary(2)).unwrap()
    }

    #[test]
    fn identity_process_is_free() {
        let mut rng = stream(3, 0);
        let setup = ErasureSetup::new(random_state(&mut rng, 2), SpectrumModel::qubit(1.0).unwrap().matrix(), beta(0.7), CMatrix::identity(4, 4)).unwrap();
        let l = run_erasure(&setup).unwrap();
        for v in [l.delta_s_system, l.delta_s_bath, l.heat_to_bath, l.mutual_info, l.rel_entropy_bath, l.entropy_production] {
            assert!(v.abs() < 1e-12, "{l:?}");
        }
    }

    #[test]
    fn single_swap_matches_closed_form() {
        let e = 1.0;
        let l = run_erasure(&swap_setup(e, 1.0)).unwrap();
        let expected = swap_erasure_cost(e, beta(1.0)).unwrap();
        assert_relative_eq!(l.heat_to_bath, expected, epsilon = 1e-12);
        // mpmath: ½ − e⁻¹/(1 + e⁻¹)
        assert_relative_eq!(expected, 0.231_058_578_630_004_9, epsilon = 1e-13);
        assert!(l.residual < 1e-10);
        assert!(l.mutual_info.abs() < 1e-12);
    }

    #[test]
    fn random_unitaries_satisfy_equality() {
        let mut rng = stream(4, 0);
        for _ in 0..200 {
            let rho = random_state(&mut rng, 2);
            let u = haar_unitary(&mut rng, 4);
            let setup = ErasureSetup::new(rho, SpectrumModel::qubit(1.3).unwrap().matrix(), beta(0.8), u).unwrap();
            let l = run_erasure(&setup).unwrap();
            assert!(l.residual < 1e-9);
            assert!(l.mutual_info >= -1e-10 && l.rel_entropy_bath >= -1e-10);
        }
    }

    #[test]
    fn setup_validation() {
        let h = SpectrumModel::qubit(1.0).unwrap().matrix();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(ErasureSetup::new(rho.clone(), h.clone(), beta(1.0), CMatrix::identity(6, 6)), Err(CoreError::Shape { .. })));
        let bad = CMatrix::identity(4, 4).scale(1.1);
        assert!(matches!(ErasureSetup::new(rho, h, beta(1.0), bad), Err(CoreError::NotUnitary { .. })));
    }

    #[test]
    fn swap_cost_limits() {
        assert_eq!(swap_erasure_cost(0.0, beta(1.0)).unwrap(), 0.0);
        assert_eq!(swap_erasure_cost(2.0, InverseTemperature::ground_state()).unwrap(), 1.0);
        let mut prev = 0.0;
        for k in 1..50 {
            let w = swap_erasure_cost(k as f64 * 0.5, beta(1.0)).unwrap();
            assert!(w > prev);
            prev = w;
        }
        assert!(swap_erasure_cost(-1.0, beta(1.0)).is_err());
    }

    #[test]
    fn landauer_minimum_examples() {
        assert_relative_eq!(landauer_minimum(-LN_2, beta(1.0)), LN_2, epsilon = 1e-15);
        assert_eq!(landauer_minimum(0.0, beta(3.0)), 0.0);
        assert_relative_eq!(landauer_minimum(-(4f64.ln()), beta(2.0)), 4f64.ln() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn ledger_csv_row_has_six_fields() {
        let l = run_erasure(&swap_setup(1.0, 1.0)).unwrap();
        assert_eq!(l.csv_row().split(',').count(), Ledger::CSV_HEADER.split(',').count());
    }
}
