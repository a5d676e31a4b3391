use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::langevin::{summarize_indexed, InitialCondition, LangevinParams};
use super::potential::PotentialSpec;
use crate::error::{domain, Result};
use crate::numeric::{jackknife_of_mean, Estimate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JarzynskiReport {
    pub n_traj: usize,
    /// ⟨e^{−βW}⟩.
    pub lhs: f64,
    /// e^{−βΔF}.
    pub rhs: f64,
    /// |lhs/rhs − 1|.
    pub relative_deviation: f64,
    /// Jackknife standard error of lhs.
    pub lhs_se: f64,
    /// Jackknife estimate of ΔF from −kT ln⟨e^{−βW}⟩ with its standard error.
    pub delta_f_estimate: f64,
    pub delta_f_estimate_se: f64,
    pub delta_f: f64,
    pub mean_work: f64,
    pub work_se: f64,
    /// ⟨W⟩ ≥ ΔF − 3·SE.
    pub jensen_ok: bool,
}

/// Exact ΔF between the initial and final stiffness of a harmonic trap.
pub fn harmonic_delta_f(potential: &PotentialSpec, kt: f64) -> Result<f64> {
    match potential {
        PotentialSpec::Harmonic { stiffness } => {
            let (k1, k2) = (stiffness.start(), stiffness.end());
            if !(k1 > 0.0 && k2 > 0.0) {
                return domain("ΔF needs positive initial and final stiffness");
            }
            Ok(0.5 * kt * (k2 / k1).ln())
        }
        PotentialSpec::DoubleWell { .. } => domain("analytic ΔF is available for harmonic traps only"),
    }
}

/// Sample work along `n_traj` paths started in equilibrium and compare ⟨e^{−βW}⟩ with e^{−βΔF}.
pub fn jarzynski_check(potential: &PotentialSpec, params: &LangevinParams, n_traj: usize) -> Result<JarzynskiReport> {
    params.validate(potential)?;
    if !(params.kt > 0.0) {
        return domain("the work average needs kT > 0");
    }
    if n_traj < 2 {
        return domain("need at least two trajectories");
    }
    let delta_f = harmonic_delta_f(potential, params.kt)?;
    let beta = 1.0 / params.kt;
    let works: Vec<f64> = (0..n_traj as u64)
        .into_par_iter()
        .map(|i| summarize_indexed(potential, params, InitialCondition::Equilibrium, i).map(|s| s.work))
        .collect::<Result<_>>()?;
    let expw: Vec<f64> = works.iter().map(|w| (-beta * w).exp()).collect();
    let (lhs, lhs_se) = jackknife_of_mean(&expw, |m| m);
    let (df_est, df_se) = jackknife_of_mean(&expw, |m| -params.kt * m.ln());
    let rhs = (-beta * delta_f).exp();
    let w = Estimate::from_samples(&works);
    Ok(JarzynskiReport {
        n_traj,
        lhs,
        rhs,
        relative_deviation: (lhs / rhs - 1.0).abs(),
        lhs_se,
        delta_f_estimate: df_est,
        delta_f_estimate_se: df_se,
        delta_f,
        mean_work: w.mean,
        work_se: w.se,
        jensen_ok: w.mean >= delta_f - 3.0 * w.se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::potential::Schedule;

    fn ramp(k1: f64, k2: f64, tau: f64) -> PotentialSpec {
        PotentialSpec::Harmonic { stiffness: Schedule::linear(0.0, k1, tau, k2).unwrap() }
    }

    #[test]
    fn identity_protocol_is_exact() {
        let u = PotentialSpec::Harmonic { stiffness: Schedule::constant(2.0) };
        let p = LangevinParams { friction: 1.0, kt: 1.0, dt: 0.01, seed: 1, n_steps: 50 };
        let r = jarzynski_check(&u, &p, 100).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert_eq!(r.rhs, 1.0);
        assert_eq!(r.mean_work, 0.0);
    }

    #[test]
    fn quasistatic_ramp_saturates_free_energy_bound() {
        let u = ramp(1.0, 4.0, 100.0);
        let p = LangevinParams::for_duration(1.0, 1.0, 0.01, 3, 100.0).unwrap();
        let r = jarzynski_check(&u, &p, 2000).unwrap();
        assert!(((r.mean_work - r.delta_f) / r.delta_f).abs() < 0.02, "{r:?}");
        assert!(r.jensen_ok);
    }

    #[test]
    fn fast_quench_moderate_ensemble() {
        let u = ramp(1.0, 4.0, 0.1);
        let p = LangevinParams::for_duration(1.0, 1.0, 0.005, 4, 0.1).unwrap();
        let r = jarzynski_check(&u, &p, 20_000).unwrap();
        assert!(r.relative_deviation < 0.05, "{r:?}");
        assert!(r.mean_work - r.delta_f > 0.2);
        assert!((r.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn double_well_has_no_closed_form() {
        let u = PotentialSpec::DoubleWell { barrier: Schedule::constant(1.0), separation: 1.0, tilt: Schedule::constant(0.0) };
        let p = LangevinParams { friction: 1.0, kt: 1.0, dt: 0.001, seed: 1, n_steps: 5 };
        assert!(jarzynski_check(&u, &p, 10).is_err());
    }
}
