use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::potential::PotentialSpec;
use crate::error::{domain, CoreError, Result};
use crate::rng::{stream, Rng};

pub const STABILITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LangevinParams {
    pub friction: f64,
    pub kt: f64,
    pub dt: f64,
    pub seed: u64,
    pub n_steps: usize,
}

impl LangevinParams {
    /// Parameters whose `n_steps` covers `duration` at step `dt`.
    pub fn for_duration(friction: f64, kt: f64, dt: f64, seed: u64, duration: f64) -> Result<Self> {
        if !(dt > 0.0) || !(duration >= 0.0) {
            return domain(format!("need dt > 0 and duration ≥ 0, got dt = {dt}, duration = {duration}"));
        }
        let n_steps = (duration / dt).round() as usize;
        Ok(Self { friction, kt, dt, seed, n_steps })
    }

    pub fn duration(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Reject non-physical values and steps violating dt·max|U''|/γ < 0.1.
    pub fn validate(&self, potential: &PotentialSpec) -> Result<()> {
        if !(self.friction > 0.0 && self.friction.is_finite()) {
            return domain(format!("friction must be positive, got {}", self.friction));
        }
        if !(self.kt >= 0.0 && self.kt.is_finite()) {
            return domain(format!("kT must be non-negative, got {}", self.kt));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return domain(format!("dt must be positive, got {}", self.dt));
        }
        potential.validate()?;
        let ratio = self.dt * potential.max_curvature() / self.friction;
        if ratio >= STABILITY_LIMIT {
            return domain(format!("time step too large: dt·max|U''|/γ = {ratio:.3} ≥ {STABILITY_LIMIT}"));
        }
        Ok(())
    }

    fn noise_amplitude(&self) -> f64 {
        (2.0 * self.kt * self.dt / self.friction).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum InitialCondition {
    Fixed(f64),
    /// Boltzmann distribution of the potential at t = 0.
    Equilibrium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub work_increments: Vec<f64>,
    pub heat_increments: Vec<f64>,
}

impl Trajectory {
    pub fn work(&self) -> f64 {
        crate::numeric::pairwise_sum(&self.work_increments)
    }

    /// Heat absorbed from the bath.
    pub fn heat(&self) -> f64 {
        crate::numeric::pairwise_sum(&self.heat_increments)
    }

    pub fn final_position(&self) -> f64 {
        *self.positions.last().expect("trajectory holds at least x0")
    }
}

/// Energetics of one path without storing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub x0: f64,
    pub x_final: f64,
    pub work: f64,
    /// Heat absorbed from the bath.
    pub heat: f64,
    pub delta_u: f64,
}

/// Draw x0 from the Boltzmann density at t = 0.
pub fn sample_equilibrium(potential: &PotentialSpec, kt: f64, rng: &mut Rng) -> Result<f64> {
    match potential {
        PotentialSpec::Harmonic { stiffness } => {
            let k = stiffness.value(0.0);
            if !(k > 0.0) {
                return domain("free particle has no equilibrium distribution");
            }
            let z: f64 = rng.sample(StandardNormal);
            Ok(z * (kt / k).sqrt())
        }
        PotentialSpec::DoubleWell { .. } => {
            let wall = potential.wall().expect("double well has walls");
            if kt == 0.0 {
                return domain("equilibrium sampling needs kT > 0");
            }
            // rejection from the uniform density on [−wall, wall]
            let grid = 4001;
            let u_min = (0..grid)
                .map(|i| potential.energy(-wall + 2.0 * wall * i as f64 / (grid - 1) as f64, 0.0))
                .fold(f64::INFINITY, f64::min);
            // slack under the grid minimum keeps the envelope valid between grid points
            let floor = u_min - 1e-3 * kt;
            for _ in 0..10_000_000 {
                let x = wall * (2.0 * rng.random::<f64>() - 1.0);
                let accept = (-(potential.energy(x, 0.0) - floor) / kt).exp();
                if rng.random::<f64>() < accept {
                    return Ok(x);
                }
            }
            Err(CoreError::Invariant("equilibrium rejection sampler did not terminate".into()))
        }
    }
}

#[inline]
fn reflect(x: f64, wall: Option<f64>) -> f64 {
    match wall {
        Some(w) if x > w => (2.0 * w - x).max(-w),
        Some(w) if x < -w => (-2.0 * w - x).min(w),
        _ => x,
    }
}

/// Core Euler–Maruyama loop. `noise` yields the unit normal for each step; `visit` sees every
/// step as (index, x_before, x_after, δw, δq).
pub fn integrate<N, V>(potential: &PotentialSpec, params: &LangevinParams, x0: f64, mut noise: N, mut visit: V) -> Result<PathSummary>
where
    N: FnMut() -> f64,
    V: FnMut(usize, f64, f64, f64, f64),
{
    let wall = potential.wall();
    let bound = potential.divergence_bound(params.kt);
    let amp = params.noise_amplitude();
    let mobility = params.dt / params.friction;
    let mut x = x0;
    let mut work = 0.0;
    let mut heat = 0.0;
    let mut comp_w = 0.0;
    let mut comp_q = 0.0;
    for i in 0..params.n_steps {
        let t = i as f64 * params.dt;
        let t1 = (i + 1) as f64 * params.dt;
        let u_old = potential.energy(x, t);
        let u_mid = potential.energy(x, t1);
        let dw = u_mid - u_old;
        let drift = -potential.gradient(x, t1) * mobility;
        let x_new = reflect(x + drift + amp * noise(), wall);
        if !x_new.is_finite() || x_new.abs() > bound {
            return Err(CoreError::Divergence { step: i + 1, position: x_new });
        }
        let dq = potential.energy(x_new, t1) - u_mid;
        visit(i, x, x_new, dw, dq);
        // Kahan accumulation keeps the path total consistent with the pairwise increments
        let y = dw - comp_w;
        let s = work + y;
        comp_w = (s - work) - y;
        work = s;
        let y = dq - comp_q;
        let s = heat + y;
        comp_q = (s - heat) - y;
        heat = s;
        x = x_new;
    }
    let t_end = params.n_steps as f64 * params.dt;
    Ok(PathSummary { x0, x_final: x, work, heat, delta_u: potential.energy(x, t_end) - potential.energy(x0, 0.0) })
}

fn initial_position(potential: &PotentialSpec, params: &LangevinParams, init: InitialCondition, rng: &mut Rng) -> Result<f64> {
    match init {
        InitialCondition::Fixed(x) => Ok(x),
        InitialCondition::Equilibrium => sample_equilibrium(potential, params.kt, rng),
    }
}

/// Full trajectory for ensemble member `index` of `params.seed`.
pub fn simulate_indexed(potential: &PotentialSpec, params: &LangevinParams, init: InitialCondition, index: u64) -> Result<Trajectory> {
    params.validate(potential)?;
    let mut rng = stream(params.seed, index);
    let x0 = initial_position(potential, params, init, &mut rng)?;
    let n = params.n_steps;
    let mut traj = Trajectory {
        times: (0..=n).map(|i| i as f64 * params.dt).collect(),
        positions: Vec::with_capacity(n + 1),
        work_increments: Vec::with_capacity(n),
        heat_increments: Vec::with_capacity(n),
    };
    traj.positions.push(x0);
    integrate(potential, params, x0, || rng.sample(StandardNormal), |_, _, x1, dw, dq| {
        traj.positions.push(x1);
        traj.work_increments.push(dw);
        traj.heat_increments.push(dq);
    })?;
    Ok(traj)
}

/// Single trajectory driven by stream 0 of `params.seed`.
pub fn simulate(potential: &PotentialSpec, params: &LangevinParams, init: InitialCondition) -> Result<Trajectory> {
    simulate_indexed(potential, params, init, 0)
}

/// Energetics of ensemble member `index`; consumes the same random numbers as
/// [`simulate_indexed`], so the results agree bitwise.
pub fn summarize_indexed(potential: &PotentialSpec, params: &LangevinParams, init: InitialCondition, index: u64) -> Result<PathSummary> {
    let mut rng = stream(params.seed, index);
    let x0 = initial_position(potential, params, init, &mut rng)?;
    integrate(potential, params, x0, || rng.sample(StandardNormal), |_, _, _, _, _| {})
}

/// W = Σ [U(x_i, t_{i+1}) − U(x_i, t_i)].
pub fn trajectory_work(traj: &Trajectory, potential: &PotentialSpec) -> f64 {
    let incs: Vec<f64> = traj
        .times
        .windows(2)
        .zip(&traj.positions)
        .map(|(t, &x)| potential.energy(x, t[1]) - potential.energy(x, t[0]))
        .collect();
    crate::numeric::pairwise_sum(&incs)
}

/// Heat absorbed from the bath, q = Σ [U(x_{i+1}, t_{i+1}) − U(x_i, t_{i+1})]. This is the
/// midpoint (Stratonovich) integral of ∂U/∂x·dx evaluated exactly, so ΔU = W + q per step.
pub fn trajectory_heat(traj: &Trajectory, potential: &PotentialSpec) -> f64 {
    let incs: Vec<f64> = traj
        .positions
        .windows(2)
        .zip(traj.times.iter().skip(1))
        .map(|(x, &t1)| potential.energy(x[1], t1) - potential.energy(x[0], t1))
        .collect();
    crate::numeric::pairwise_sum(&incs)
}

/// Σ (x_{i+1} − x_i)·∂U/∂x((x_i + x_{i+1})/2, t_{i+1}), which differs from
/// [`trajectory_heat`] by O(dx³) per step.
pub fn midpoint_heat(traj: &Trajectory, potential: &PotentialSpec) -> f64 {
    let incs: Vec<f64> = traj
        .positions
        .windows(2)
        .zip(traj.times.iter().skip(1))
        .map(|(x, &t1)| (x[1] - x[0]) * potential.gradient(0.5 * (x[0] + x[1]), t1))
        .collect();
    crate::numeric::pairwise_sum(&incs)
}

/// Heat released into the bath.
pub fn dissipated_heat(traj: &Trajectory, potential: &PotentialSpec) -> f64 {
    -trajectory_heat(traj, potential)
}

/// Largest per-step |ΔU − δw − δq|.
pub fn first_law_defect(traj: &Trajectory, potential: &PotentialSpec) -> f64 {
    (0..traj.work_increments.len())
        .map(|i| {
            let du = potential.energy(traj.positions[i + 1], traj.times[i + 1]) - potential.energy(traj.positions[i], traj.times[i]);
            (du - traj.work_increments[i] - traj.heat_increments[i]).abs()
        })
        .fold(0.0, f64::max)
}
