use rand_distr::StandardNormal;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::langevin::{integrate, sample_equilibrium, LangevinParams, PathSummary};
use super::potential::{PotentialSpec, Schedule};
use crate::error::{domain, Result};
use crate::numeric::{linear_fit, xlogx, Estimate};
use crate::rng::stream;

pub const MIN_TRAJECTORIES: usize = 1000;

/// Barrier lowered, tilt ramped over `tau` while the barrier is low, barrier raised while the
/// tilt is released. Total duration `tau + 2·ramp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErasureProtocol {
    pub tau: f64,
    pub f_max: f64,
    pub ramp: f64,
    pub barrier_high: f64,
    pub barrier_low: f64,
    pub separation: f64,
}

impl ErasureProtocol {
    pub fn new(tau: f64, f_max: f64) -> Self {
        Self { tau, f_max, ramp: 3.0, barrier_high: 8.0, barrier_low: 2.2, separation: 1.0 }
    }

    pub fn duration(&self) -> f64 {
        self.tau + 2.0 * self.ramp
    }

    pub fn potential(&self) -> Result<PotentialSpec> {
        if !(self.tau > 0.0) || !(self.ramp > 0.0) {
            return domain("erasure durations must be positive");
        }
        let (r, t) = (self.ramp, self.tau);
        let barrier = Schedule::new(vec![(0.0, self.barrier_high), (r, self.barrier_low), (r + t, self.barrier_low), (2.0 * r + t, self.barrier_high)])?;
        let tilt = Schedule::new(vec![(0.0, 0.0), (r, 0.0), (r + t, self.f_max), (2.0 * r + t, 0.0)])?;
        Ok(PotentialSpec::DoubleWell { barrier, separation: self.separation, tilt })
    }

    /// Integration parameters spanning the full protocol.
    pub fn langevin_params(&self, friction: f64, kt: f64, dt: f64, seed: u64) -> Result<LangevinParams> {
        LangevinParams::for_duration(friction, kt, dt, seed, self.duration())
    }
}

/// Generalised Landauer cost kT[ln 2 + r ln r + (1 − r) ln(1 − r)] for success rate r.
pub fn q_of_r(r: f64, kt: f64) -> f64 {
    kt * (std::f64::consts::LN_2 + xlogx(r) + xlogx(1.0 - r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErasureOutcome {
    pub tau: f64,
    pub f_max: f64,
    pub n_traj: usize,
    pub success_rate: f64,
    pub success_se: f64,
    /// Mean heat released into the bath, −⟨q⟩.
    pub mean_heat: f64,
    pub heat_se: f64,
    pub heat_samples: Vec<f64>,
    pub mean_work: f64,
    pub work_se: f64,
    pub q_r: f64,
    /// mean_heat ≥ Q(r) − 3·SE.
    pub bound_satisfied: bool,
    /// Largest |ΔU − W − q| over the sampled paths.
    pub first_law_defect: f64,
    pub warning: Option<String>,
}

/// Ensemble for run `index`: x0 from the t = 0 equilibrium with its sign alternating by
/// index, so exactly half the paths start in each well.
pub(crate) fn erasure_path(potential: &PotentialSpec, params: &LangevinParams, index: u64, noise_halving: bool) -> Result<PathSummary> {
    let mut rng = stream(params.seed, index);
    let x = sample_equilibrium(potential, params.kt, &mut rng)?.abs();
    let x0 = if index % 2 == 0 { x } else { -x };
    if noise_halving {
        // coarse path driven by the sum of pairs of fine increments
        integrate(potential, params, x0, || {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            (a + b) * std::f64::consts::FRAC_1_SQRT_2
        }, |_, _, _, _, _| {})
    } else {
        integrate(potential, params, x0, || rng.sample(StandardNormal), |_, _, _, _, _| {})
    }
}

pub fn erasure_experiment(protocol: &ErasureProtocol, params: &LangevinParams, n_traj: usize) -> Result<ErasureOutcome> {
    if n_traj < MIN_TRAJECTORIES {
        return domain(format!("success rate needs at least {MIN_TRAJECTORIES} trajectories, got {n_traj}"));
    }
    let potential = protocol.potential()?;
    params.validate(&potential)?;
    if (params.duration() - protocol.duration()).abs() > params.dt {
        return domain(format!("n_steps·dt = {} does not cover the protocol duration {}", params.duration(), protocol.duration()));
    }
    let paths: Vec<PathSummary> = (0..n_traj as u64).into_par_iter().map(|i| erasure_path(&potential, params, i, false)).collect::<Result<_>>()?;
    Ok(summarize(protocol, params.kt, &paths))
}

/// Run the protocol at `params.dt` and at `params.dt / 2` with coupled noise: each coarse
/// increment is the normalised sum of the two fine increments it spans. Returns
/// `(coarse, fine)`.
pub fn dt_halving_check(protocol: &ErasureProtocol, params: &LangevinParams, n_traj: usize) -> Result<(ErasureOutcome, ErasureOutcome)> {
    let potential = protocol.potential()?;
    params.validate(&potential)?;
    let fine_params = LangevinParams { dt: params.dt / 2.0, n_steps: params.n_steps * 2, ..*params };
    let run = |p: &LangevinParams, halving: bool| -> Result<Vec<PathSummary>> {
        (0..n_traj as u64).into_par_iter().map(|i| erasure_path(&potential, p, i, halving)).collect()
    };
    let coarse = run(params, true)?;
    let fine = run(&fine_params, false)?;
    Ok((summarize(protocol, params.kt, &coarse), summarize(protocol, params.kt, &fine)))
}

pub(crate) fn summarize(protocol: &ErasureProtocol, kt: f64, paths: &[PathSummary]) -> ErasureOutcome {
    let success: Vec<f64> = paths.iter().map(|p| if p.x_final > 0.0 { 1.0 } else { 0.0 }).collect();
    let heat: Vec<f64> = paths.iter().map(|p| -p.heat).collect();
    let work: Vec<f64> = paths.iter().map(|p| p.work).collect();
    let r = Estimate::from_samples(&success);
    let q = Estimate::from_samples(&heat);
    let w = Estimate::from_samples(&work);
    let q_r = q_of_r(r.mean, kt);
    let defect = paths.iter().map(|p| (p.delta_u - p.work - p.heat).abs()).fold(0.0, f64::max);
    // r se of zero (all paths agree) cannot be indistinguishable from one half
    let warning = (protocol.f_max > 0.0 && (r.mean - 0.5).abs() <= 2.0 * r.se)
        .then(|| format!("ineffective tilt: success rate {:.4} ± {:.4} is indistinguishable from 1/2", r.mean, r.se));
    ErasureOutcome {
        tau: protocol.tau,
        f_max: protocol.f_max,
        n_traj: paths.len(),
        success_rate: r.mean,
        success_se: r.se,
        mean_heat: q.mean,
        heat_se: q.se,
        heat_samples: heat,
        mean_work: w.mean,
        work_se: w.se,
        q_r,
        bound_satisfied: q.mean >= q_r - 3.0 * q.se,
        first_law_defect: defect,
        warning,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteTimeFit {
    pub q_l: f64,
    pub alpha: f64,
}

/// Least-squares fit of heat = Q_L + α/τ over `(τ, heat)` points.
pub fn fit_finite_time(points: &[(f64, f64)]) -> Result<FiniteTimeFit> {
    if points.len() < 2 || points.iter().any(|p| !(p.0 > 0.0)) {
        return domain("fit needs at least two points with τ > 0");
    }
    let xs: Vec<(f64, f64)> = points.iter().map(|&(t, q)| (1.0 / t, q)).collect();
    let (q_l, alpha) = linear_fit(&xs);
    Ok(FiniteTimeFit { q_l, alpha })
}
