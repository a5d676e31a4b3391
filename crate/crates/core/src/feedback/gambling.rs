use rand::Rng as _;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::Estimate;
use crate::rng::stream;

pub const DENSITY_STEPS: usize = 10_000;
pub const DENSITY_FLOOR: f64 = 1e-300;
pub const DELTA_F_CONVENTION: &str =
    "stochastic: ΔF = E(x_T, λ_T) + kT ln ρ(x_T, T) − F_eq(λ_0); the equilibrium difference F_eq(λ_T) − F_eq(λ_0) is reported separately";

/// Two-level system with energies 0 and λ(t), λ ramped linearly from `lambda0` to `lambda1`
/// over [0, tau].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRamp {
    pub lambda0: f64,
    pub lambda1: f64,
    pub tau: f64,
}

impl GapRamp {
    pub fn lambda(&self, t: f64) -> f64 {
        self.lambda0 + (self.lambda1 - self.lambda0) * (t / self.tau).clamp(0.0, 1.0)
    }

    pub fn slope(&self) -> f64 {
        (self.lambda1 - self.lambda0) / self.tau
    }

    /// Same ramp run backwards in time.
    pub fn reversed(&self) -> Self {
        Self { lambda0: self.lambda1, lambda1: self.lambda0, tau: self.tau }
    }
}

/// Attempt rate k: 0→1 at k·e^{−βλ/2}, 1→0 at k·e^{βλ/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStateParams {
    pub attempt_rate: f64,
    pub kt: f64,
    pub seed: u64,
}

impl TwoStateParams {
    fn rates(&self, lambda: f64) -> (f64, f64) {
        let h = 0.5 * lambda / self.kt;
        (self.attempt_rate * (-h).exp(), self.attempt_rate * h.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StoppingRule {
    /// Stop the first time the accumulated work reaches `threshold` from the given side, or at
    /// the horizon.
    WorkThreshold { threshold: f64, direction: Crossing },
    DeadlineOnly,
}

/// Excited-state occupation sampled on a uniform grid, with its time derivative.
#[derive(Debug, Clone)]
pub struct DensityTable {
    h: f64,
    p1: Vec<f64>,
    dp1: Vec<f64>,
}

impl DensityTable {
    /// Integrate the master equation by fixed-step RK4 from p1(0) = `p1_0`.
    pub fn integrate(ramp: &GapRamp, params: &TwoStateParams, p1_0: f64, steps: usize) -> Self {
        let h = ramp.tau / steps as f64;
        let f = |t: f64, p: f64| {
            let (up, down) = params.rates(ramp.lambda(t));
            up * (1.0 - p) - down * p
        };
        let mut p1 = Vec::with_capacity(steps + 1);
        let mut dp1 = Vec::with_capacity(steps + 1);
        let mut p = p1_0;
        for i in 0..=steps {
            let t = i as f64 * h;
            p1.push(p);
            dp1.push(f(t, p));
            if i < steps {
                let k1 = f(t, p);
                let k2 = f(t + 0.5 * h, p + 0.5 * h * k1);
                let k3 = f(t + 0.5 * h, p + 0.5 * h * k2);
                let k4 = f(t + h, p + h * k3);
                p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        Self { h, p1, dp1 }
    }

    /// Cubic Hermite interpolation of p1 at time t.
    pub fn p1(&self, t: f64) -> f64 {
        let last = self.p1.len() - 1;
        let s = (t / self.h).clamp(0.0, last as f64);
        let i = (s.floor() as usize).min(last.saturating_sub(1));
        if last == 0 {
            return self.p1[0];
        }
        let u = s - i as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        h00 * self.p1[i] + h10 * self.h * self.dp1[i] + h01 * self.p1[i + 1] + h11 * self.h * self.dp1[i + 1]
    }

    /// Occupation of state `x` at time t.
    pub fn density(&self, x: u8, t: f64) -> f64 {
        let p = self.p1(t);
        if x == 1 {
            p
        } else {
            1.0 - p
        }
    }
}

fn excited_equilibrium(lambda: f64, kt: f64) -> f64 {
    1.0 / (1.0 + (lambda / kt).exp())
}

fn free_energy(lambda: f64, kt: f64) -> f64 {
    // −kT ln(1 + e^{−βλ}), stable for either sign of λ
    let b = lambda / kt;
    -kt * if b >= 0.0 { (-b).exp().ln_1p() } else { -b + b.exp().ln_1p() }
}

/// One stopped path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppedPath {
    pub stop_time: f64,
    pub state: u8,
    pub work: f64,
}

fn sample_path(ramp: &GapRamp, params: &TwoStateParams, rule: &StoppingRule, index: u64) -> StoppedPath {
    let mut rng = stream(params.seed, index);
    let mut x: u8 = u8::from(rng.random::<f64>() < excited_equilibrium(ramp.lambda0, params.kt));
    let lam_max = ramp.lambda0.abs().max(ramp.lambda1.abs());
    let bound = params.attempt_rate * (0.5 * lam_max / params.kt).exp();
    let slope = ramp.slope();
    let mut t = 0.0;
    let mut w = 0.0;
    let reached = |w: f64| match rule {
        StoppingRule::WorkThreshold { threshold, direction: Crossing::Above } => w >= *threshold,
        StoppingRule::WorkThreshold { threshold, direction: Crossing::Below } => w <= *threshold,
        StoppingRule::DeadlineOnly => false,
    };
    if reached(w) {
        return StoppedPath { stop_time: 0.0, state: x, work: w };
    }
    loop {
        let candidate = t + rng.sample::<f64, _>(Exp1) / bound;
        let seg_end = candidate.min(ramp.tau);
        if x == 1 {
            if let StoppingRule::WorkThreshold { threshold, .. } = rule {
                // W moves at rate λ̇ while excited
                if slope != 0.0 {
                    let hit = t + (threshold - w) / slope;
                    if hit >= t && hit <= seg_end {
                        return StoppedPath { stop_time: hit, state: 1, work: *threshold };
                    }
                }
            }
            w += ramp.lambda(seg_end) - ramp.lambda(t);
        }
        t = seg_end;
        if candidate >= ramp.tau {
            return StoppedPath { stop_time: ramp.tau, state: x, work: w };
        }
        let (up, down) = params.rates(ramp.lambda(t));
        let rate = if x == 0 { up } else { down };
        if rng.random::<f64>() * bound < rate {
            x ^= 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GamblingReport {
    pub n_traj: usize,
    pub n_excluded: usize,
    pub n_stopped_early: usize,
    pub mean_stop_time: f64,
    pub mean_w_stopped: f64,
    pub w_se: f64,
    /// ⟨ΔF⟩ under [`DELTA_F_CONVENTION`].
    pub mean_df_stopped: f64,
    pub df_se: f64,
    pub mean_df_eq_stopped: f64,
    pub df_eq_se: f64,
    pub mean_delta: f64,
    pub delta_se: f64,
    /// ⟨e^{−β(W−ΔF)−δ}⟩.
    pub ft_estimator: f64,
    pub ft_se: f64,
    /// ⟨W⟩ − ⟨ΔF⟩ + kT⟨δ⟩.
    pub margin: f64,
    pub margin_se: f64,
    /// ⟨W⟩ − ⟨ΔF⟩, negative when the gambler beats the plain second law.
    pub w_minus_df: f64,
    pub w_minus_df_se: f64,
    pub inequality_ok: bool,
    pub ft_ok: bool,
    pub delta_f_convention: String,
}

pub fn gambling_demon(ramp: &GapRamp, params: &TwoStateParams, rule: &StoppingRule, n_traj: usize) -> Result<GamblingReport> {
    if !(ramp.tau > 0.0 && params.kt > 0.0 && params.attempt_rate > 0.0) {
        return domain("need τ, kT and the attempt rate positive");
    }
    if !(ramp.lambda0.is_finite() && ramp.lambda1.is_finite()) {
        return domain("gap schedule must be finite");
    }
    if n_traj < 2 {
        return domain("need at least two trajectories");
    }
    let kt = params.kt;
    let forward = DensityTable::integrate(ramp, params, excited_equilibrium(ramp.lambda0, kt), DENSITY_STEPS);
    let reverse = DensityTable::integrate(&ramp.reversed(), params, excited_equilibrium(ramp.lambda1, kt), DENSITY_STEPS);
    let f0 = free_energy(ramp.lambda0, kt);

    let paths: Vec<StoppedPath> = (0..n_traj as u64).into_par_iter().map(|i| sample_path(ramp, params, rule, i)).collect();

    let mut w = Vec::with_capacity(n_traj);
    let mut df = Vec::with_capacity(n_traj);
    let mut df_eq = Vec::with_capacity(n_traj);
    let mut delta = Vec::with_capacity(n_traj);
    let mut ft = Vec::with_capacity(n_traj);
    let mut margin = Vec::with_capacity(n_traj);
    let mut gain = Vec::with_capacity(n_traj);
    let mut stop_times = Vec::with_capacity(n_traj);
    let mut excluded = 0;
    let mut early = 0;
    for p in &paths {
        let rho = forward.density(p.state, p.stop_time);
        let rho_rev = reverse.density(p.state, ramp.tau - p.stop_time);
        if !(rho_rev >= DENSITY_FLOOR) || !(rho >= DENSITY_FLOOR) {
            excluded += 1;
            continue;
        }
        if p.stop_time < ramp.tau {
            early += 1;
        }
        let lam = ramp.lambda(p.stop_time);
        let energy = if p.state == 1 { lam } else { 0.0 };
        let d_f = energy + kt * rho.ln() - f0;
        let d = rho.ln() - rho_rev.ln();
        w.push(p.work);
        df.push(d_f);
        df_eq.push(free_energy(lam, kt) - f0);
        delta.push(d);
        ft.push((-(p.work - d_f) / kt - d).exp());
        margin.push(p.work - d_f + kt * d);
        gain.push(p.work - d_f);
        stop_times.push(p.stop_time);
    }
    if w.len() < 2 {
        return domain("fewer than two trajectories survived the density floor");
    }
    let [w, df, df_eq, delta, ft, margin, gain] = [&w, &df, &df_eq, &delta, &ft, &margin, &gain].map(|v| Estimate::from_samples(v));
    Ok(GamblingReport {
        n_traj,
        n_excluded: excluded,
        n_stopped_early: early,
        mean_stop_time: Estimate::from_samples(&stop_times).mean,
        mean_w_stopped: w.mean,
        w_se: w.se,
        mean_df_stopped: df.mean,
        df_se: df.se,
        mean_df_eq_stopped: df_eq.mean,
        df_eq_se: df_eq.se,
        mean_delta: delta.mean,
        delta_se: delta.se,
        ft_estimator: ft.mean,
        ft_se: ft.se,
        margin: margin.mean,
        margin_se: margin.se,
        w_minus_df: gain.mean,
        w_minus_df_se: gain.se,
        inequality_ok: margin.mean >= -3.0 * margin.se,
        ft_ok: (ft.mean - 1.0).abs() <= 3.0 * ft.se,
        delta_f_convention: DELTA_F_CONVENTION.into(),
    })
}
