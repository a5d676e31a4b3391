//! The built-in experiments. Each owns a strict parameter struct whose `Default` is the
//! documented default config.

use std::f64::consts::LN_2;

use demon_core::feedback::{
    gambling_demon, measurement_gain, staircase_ratchet, szilard_cycle_ledger, Crossing, FeedbackMode, GapRamp, MeasurementModel, StaircaseConfig,
    StoppingRule, TwoStateParams,
};
use demon_core::info::random::{haar_unitary, random_state};
use demon_core::info::{DensityMatrix, InverseTemperature, ProbDist, SpectrumModel};
use demon_core::landauer::{
    distillation_erasure_cost, finite_size_bounds, finite_time_bound, run_erasure, single_shot_battery_bound, zero_temperature_bound, AlphaModel,
    ErasureSetup, HeatCapacityModel,
};
use demon_core::rng::stream;
use demon_core::stochastic::{erasure_experiment, jarzynski_check, ErasureProtocol, LangevinParams, PotentialSpec, Schedule};
use demon_core::szilard::{run_cycle, BoxSpec, Statistics, WallConfig};
use demon_core::{CoreError, Result};
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::record;
use crate::registry::TypedExperiment;
use crate::table::ResultTable;

/// Double-well erasure ensemble under overdamped Langevin dynamics.
pub struct Erasure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErasureParams {
    /// Hold duration at the low barrier, in units of γx_m²/kT.
    pub tau: f64,
    pub f_max: f64,
    pub friction: f64,
    pub kt: f64,
    pub dt: f64,
    pub n_traj: usize,
}

impl Default for ErasureParams {
    fn default() -> Self {
        Self { tau: 10.0, f_max: 3.0, friction: 1.0, kt: 1.0, dt: 5e-4, n_traj: 2000 }
    }
}

impl TypedExperiment for Erasure {
    type Params = ErasureParams;
    const NAME: &'static str = "erasure";
    const DESCRIPTION: &'static str = "Langevin bit erasure in a tilted double well: success rate and dissipated heat";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &ErasureParams, seed: u64) -> Result<ResultTable> {
        let protocol = ErasureProtocol::new(p.tau, p.f_max);
        let params = protocol.langevin_params(p.friction, p.kt, p.dt, seed)?;
        let o = erasure_experiment(&protocol, &params, p.n_traj)?;
        Ok(ResultTable::single(record![
            "tau" => o.tau,
            "f_max" => o.f_max,
            "n_traj" => o.n_traj,
            "success_rate" => o.success_rate,
            "success_se" => o.success_se,
            "mean_heat" => o.mean_heat,
            "heat_se" => o.heat_se,
            "q_r" => o.q_r,
            "bound_satisfied" => o.bound_satisfied,
            "mean_work" => o.mean_work,
            "work_se" => o.work_se,
            "first_law_defect" => o.first_law_defect,
            "warning" => o.warning.unwrap_or_default(),
        ]))
    }
}

/// Harmonic stiffness ramp checked against the Jarzynski equality.
pub struct Jarzynski;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JarzynskiParams {
    pub k_initial: f64,
    pub k_final: f64,
    pub tau: f64,
    pub friction: f64,
    pub kt: f64,
    pub dt: f64,
    pub n_traj: usize,
}

impl Default for JarzynskiParams {
    fn default() -> Self {
        Self { k_initial: 1.0, k_final: 4.0, tau: 10.0, friction: 1.0, kt: 1.0, dt: 0.005, n_traj: 10_000 }
    }
}

impl TypedExperiment for Jarzynski {
    type Params = JarzynskiParams;
    const NAME: &'static str = "jarzynski";
    const DESCRIPTION: &'static str = "Exponential work average over a linear stiffness ramp of a harmonic trap";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &JarzynskiParams, seed: u64) -> Result<ResultTable> {
        let r = jarzynski(p, seed)?;
        Ok(ResultTable::single(record![
            "tau" => p.tau,
            "n_traj" => r.n_traj,
            "lhs" => r.lhs,
            "lhs_se" => r.lhs_se,
            "rhs" => r.rhs,
            "relative_deviation" => r.relative_deviation,
            "delta_f" => r.delta_f,
            "delta_f_estimate" => r.delta_f_estimate,
            "delta_f_estimate_se" => r.delta_f_estimate_se,
            "mean_work" => r.mean_work,
            "work_se" => r.work_se,
            "jensen_ok" => r.jensen_ok,
        ]))
    }
}

pub fn jarzynski(p: &JarzynskiParams, seed: u64) -> Result<demon_core::stochastic::JarzynskiReport> {
    let potential = PotentialSpec::Harmonic { stiffness: Schedule::linear(0.0, p.k_initial, p.tau, p.k_final)? };
    let params = LangevinParams::for_duration(p.friction, p.kt, p.dt, seed, p.tau)?;
    jarzynski_check(&potential, &params, p.n_traj)
}

/// One cycle of the quantum Szilard engine in a box.
pub struct Szilard;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SzilardParams {
    pub n_particles: usize,
    pub statistics: Statistics,
    /// βε₁ for the full box; the box has unit length and β = 1.
    pub beta_eps1: f64,
    /// Insertion point as a fraction of the box length.
    pub wall_fraction: f64,
}

impl Default for SzilardParams {
    fn default() -> Self {
        Self { n_particles: 1, statistics: Statistics::Boltzmann, beta_eps1: 1.0, wall_fraction: 0.5 }
    }
}

impl TypedExperiment for Szilard {
    type Params = SzilardParams;
    const NAME: &'static str = "szilard";
    const DESCRIPTION: &'static str = "Insertion, expansion and removal works of a quantum Szilard cycle";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &SzilardParams, _seed: u64) -> Result<ResultTable> {
        let (bx, beta) = BoxSpec::for_reduced_temperature(p.n_particles, p.statistics, p.beta_eps1)?;
        let r = run_cycle(&bx, WallConfig::fraction(p.wall_fraction, &bx)?, beta)?;
        let p_m = r.p_m.weights().iter().map(|w| demon_core::numeric::format_float(*w)).collect::<Vec<_>>().join(";");
        Ok(ResultTable::single(record![
            "n_particles" => p.n_particles,
            "statistics" => p.statistics.name(),
            "beta_eps1" => p.beta_eps1,
            "wall_fraction" => p.wall_fraction,
            "w_ins" => r.w_ins,
            "w_exp" => r.w_exp,
            "w_rem" => r.w_rem,
            "w_tot" => r.w_tot,
            "w_tot_closed" => r.w_tot_closed,
            "w_tot_over_ln2" => r.w_tot / LN_2,
            "residual" => r.residual,
            "p_m" => p_m,
        ]))
    }
}

/// Refined Landauer bounds evaluated for one set of inputs.
pub struct Bounds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsParams {
    /// Entropy to remove, in nats.
    pub delta_s: f64,
    pub kt: f64,
    /// Phonon heat capacity C(T) = aT³ of the environment.
    pub phonon_a: f64,
    pub tau: f64,
    /// Finite-time coefficient; the Planckian value when absent.
    pub alpha: Option<f64>,
    pub bath_dim: usize,
    pub bath_size: usize,
    pub n_copies: u64,
    pub epsilon: f64,
    /// Excited population of the qubit fed to the single-shot bound.
    pub qubit_p: f64,
}

impl Default for BoundsParams {
    fn default() -> Self {
        Self { delta_s: LN_2, kt: 1.0, phonon_a: 1.0, tau: 10.0, alpha: None, bath_dim: 2, bath_size: 1, n_copies: 1, epsilon: 0.0, qubit_p: 0.5 }
    }
}

impl TypedExperiment for Bounds {
    type Params = BoundsParams;
    const NAME: &'static str = "bounds";
    const DESCRIPTION: &'static str = "Zero-temperature, finite-time, finite-size, single-shot and distillation bounds";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &BoundsParams, _seed: u64) -> Result<ResultTable> {
        let beta = InverseTemperature::from_temperature(p.kt)?;
        let zt = zero_temperature_bound(HeatCapacityModel::phonon(p.phonon_a), p.delta_s)?;
        let phonon_ref = 3f64.powf(4.0 / 3.0) / 4.0 * p.delta_s.powf(4.0 / 3.0) * p.phonon_a.powf(-1.0 / 3.0);
        let alpha = p.alpha.map_or(AlphaModel::Planckian, AlphaModel::Explicit);
        let ft = finite_time_bound(p.tau, beta, alpha)?;
        let fs = finite_size_bounds(p.delta_s, p.bath_dim, p.bath_size)?;
        if !(0.0..=1.0).contains(&p.qubit_p) {
            return Err(CoreError::Domain(format!("qubit_p must lie in [0, 1], got {}", p.qubit_p)));
        }
        let ss = single_shot_battery_bound(&DensityMatrix::diagonal(&[1.0 - p.qubit_p, p.qubit_p])?);
        let dist = distillation_erasure_cost(p.n_copies, p.epsilon, beta)?;
        let nan = f64::NAN;
        let rows = vec![
            record!["quantity" => "zero_temperature_heat", "value" => zt.heat, "reference" => phonon_ref],
            record!["quantity" => "finite_time_heat", "value" => ft, "reference" => nan],
            record!["quantity" => "finite_size_noninteracting", "value" => fs.noninteracting, "reference" => fs.quoted_qubit.unwrap_or(nan)],
            record!["quantity" => "finite_size_universal", "value" => fs.universal, "reference" => nan],
            record!["quantity" => "single_shot_bits", "value" => ss.bound_bits, "reference" => ss.entropy_bits],
            record!["quantity" => "distillation_cost", "value" => dist, "reference" => p.n_copies as f64 * p.kt * LN_2],
        ];
        let summary = rows.iter().map(|r| (r[0].1.render(), r[1].1.clone())).collect();
        Ok(ResultTable::from_records(rows, summary))
    }
}

/// Measurement/feedback/reset ledger of an information engine, with an optional ratchet run.
pub struct Feedback;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatchetMode {
    None,
    Periodic,
    EveryJump,
}

impl From<RatchetMode> for FeedbackMode {
    fn from(m: RatchetMode) -> Self {
        match m {
            RatchetMode::None => FeedbackMode::None,
            RatchetMode::Periodic => FeedbackMode::Periodic,
            RatchetMode::EveryJump => FeedbackMode::EveryJump,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeedbackParams {
    /// Binary symmetric measurement error.
    pub epsilon: f64,
    pub kt: f64,
    /// P(X = 1) before the measurement.
    pub prior: f64,
    /// Free-energy change of the post-measurement state.
    pub delta_f_y: f64,
    /// Staircase ratchet ticks; zero skips the ratchet.
    pub ratchet_ticks: usize,
    pub ratchet_mode: RatchetMode,
    pub ratchet_step_energy: f64,
    pub ratchet_period: f64,
}

impl Default for FeedbackParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            kt: 1.0,
            prior: 0.5,
            delta_f_y: 0.0,
            ratchet_ticks: 0,
            ratchet_mode: RatchetMode::Periodic,
            ratchet_step_energy: 1.0,
            ratchet_period: 1.0,
        }
    }
}

impl TypedExperiment for Feedback {
    type Params = FeedbackParams;
    const NAME: &'static str = "feedback";
    const DESCRIPTION: &'static str = "Work ledger of a measure/feedback/reset cycle through a binary symmetric channel";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &FeedbackParams, seed: u64) -> Result<ResultTable> {
        let prior = ProbDist::new(vec![1.0 - p.prior, p.prior])?;
        let meas = MeasurementModel::binary_symmetric(p.epsilon)?;
        let gain = measurement_gain(&prior, &meas, p.kt)?;
        let l = szilard_cycle_ledger(&prior, &meas, p.delta_f_y, p.kt)?;
        let mut row = record![
            "epsilon" => p.epsilon,
            "i_xm" => l.i_xm,
            "measurement_gain" => gain,
            "w_meas" => l.w_meas,
            "w_fb" => l.w_fb,
            "w_reset" => l.w_reset,
            "w_tot" => l.w_tot,
            "identity_defect" => l.identity_defect(),
        ];
        let nan = f64::NAN;
        let (v, gain_tick, gain_se, info) = if p.ratchet_ticks > 0 {
            let cfg = StaircaseConfig::standard(p.ratchet_step_energy, p.kt, p.ratchet_period, p.ratchet_mode.into(), meas);
            let r = staircase_ratchet(&cfg, p.ratchet_ticks, seed)?;
            (r.mean_velocity, r.gain_per_tick, r.gain_se, r.info_per_tick)
        } else {
            (nan, nan, nan, nan)
        };
        row.extend(record!["ratchet_velocity" => v, "ratchet_gain_per_tick" => gain_tick, "ratchet_gain_se" => gain_se, "ratchet_info_per_tick" => info]);
        Ok(ResultTable::single(row))
    }
}

/// Gambling demon: a driven two-level system stopped at a work threshold.
pub struct Gamble;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stopping {
    WorkThreshold,
    Deadline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GambleParams {
    pub lambda0: f64,
    pub lambda1: f64,
    pub tau: f64,
    pub attempt_rate: f64,
    pub kt: f64,
    pub n_traj: usize,
    pub stopping: Stopping,
    pub threshold: f64,
    pub direction: Crossing,
}

impl Default for GambleParams {
    fn default() -> Self {
        Self {
            lambda0: 0.0,
            lambda1: 3.0,
            tau: 1.0,
            attempt_rate: 1.0,
            kt: 1.0,
            n_traj: 20_000,
            stopping: Stopping::WorkThreshold,
            threshold: 0.5,
            direction: Crossing::Above,
        }
    }
}

impl GambleParams {
    pub fn rule(&self) -> StoppingRule {
        match self.stopping {
            Stopping::WorkThreshold => StoppingRule::WorkThreshold { threshold: self.threshold, direction: self.direction },
            Stopping::Deadline => StoppingRule::DeadlineOnly,
        }
    }
}

pub fn gamble(p: &GambleParams, seed: u64) -> Result<demon_core::feedback::GamblingReport> {
    let ramp = GapRamp { lambda0: p.lambda0, lambda1: p.lambda1, tau: p.tau };
    let params = TwoStateParams { attempt_rate: p.attempt_rate, kt: p.kt, seed };
    gambling_demon(&ramp, &params, &p.rule(), p.n_traj)
}

impl TypedExperiment for Gamble {
    type Params = GambleParams;
    const NAME: &'static str = "gamble";
    const DESCRIPTION: &'static str = "Stopping-time fluctuation theorem and δ-corrected second law for a two-level gambler";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &GambleParams, seed: u64) -> Result<ResultTable> {
        let r = gamble(p, seed)?;
        Ok(ResultTable::single(record![
            "n_traj" => r.n_traj,
            "n_excluded" => r.n_excluded,
            "n_stopped_early" => r.n_stopped_early,
            "mean_stop_time" => r.mean_stop_time,
            "mean_w" => r.mean_w_stopped,
            "w_se" => r.w_se,
            "mean_delta_f" => r.mean_df_stopped,
            "delta_f_se" => r.df_se,
            "mean_delta_f_eq" => r.mean_df_eq_stopped,
            "delta_f_eq_se" => r.df_eq_se,
            "mean_delta" => r.mean_delta,
            "delta_se" => r.delta_se,
            "ft_estimator" => r.ft_estimator,
            "ft_se" => r.ft_se,
            "margin" => r.margin,
            "margin_se" => r.margin_se,
            "w_minus_delta_f" => r.w_minus_df,
            "w_minus_delta_f_se" => r.w_minus_df_se,
            "inequality_ok" => r.inequality_ok,
            "ft_ok" => r.ft_ok,
            "delta_f_convention" => r.delta_f_convention,
        ]))
    }
}

/// Random system–bath unitaries checked against the exact heat equality.
pub struct ReebWolf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReebWolfParams {
    pub trials: usize,
    pub system_dim: usize,
    pub bath_dim: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    /// Bath levels are drawn uniformly from [0, level_spread).
    pub level_spread: f64,
}

impl Default for ReebWolfParams {
    fn default() -> Self {
        Self { trials: 200, system_dim: 2, bath_dim: 2, beta_min: 0.1, beta_max: 10.0, level_spread: 2.0 }
    }
}

/// (β, ledger) of trial `index`.
pub fn reeb_wolf_trial(p: &ReebWolfParams, seed: u64, index: u64) -> Result<(f64, demon_core::landauer::Ledger)> {
    let mut rng = stream(seed, index);
    let beta = rng.random_range(p.beta_min..=p.beta_max);
    let levels: Vec<f64> = (0..p.bath_dim).map(|_| rng.random::<f64>() * p.level_spread).collect();
    let h = SpectrumModel::nondegenerate(levels)?.matrix();
    let rho = random_state(&mut rng, p.system_dim);
    let u = haar_unitary(&mut rng, p.system_dim * p.bath_dim);
    let setup = ErasureSetup::new(rho, h, InverseTemperature::new(beta)?, u)?;
    Ok((beta, run_erasure(&setup)?))
}

impl TypedExperiment for ReebWolf {
    type Params = ReebWolfParams;
    const NAME: &'static str = "reeb_wolf";
    const DESCRIPTION: &'static str = "Heat equality βΔQ + ΔS = I + S(σ‖γ) for random joint unitaries";
    const DETERMINISTIC: bool = true;

    fn execute(&self, p: &ReebWolfParams, seed: u64) -> Result<ResultTable> {
        if p.trials == 0 || p.system_dim == 0 || p.bath_dim == 0 {
            return Err(CoreError::Domain("need at least one trial and non-empty system and bath".into()));
        }
        if !(p.beta_min > 0.0 && p.beta_max >= p.beta_min && p.beta_max.is_finite()) {
            return Err(CoreError::Domain(format!("need 0 < beta_min ≤ beta_max, got [{}, {}]", p.beta_min, p.beta_max)));
        }
        let trials = (0..p.trials as u64).into_par_iter().map(|i| reeb_wolf_trial(p, seed, i)).collect::<Result<Vec<_>>>()?;
        let max_residual = trials.iter().map(|(_, l)| l.residual).fold(0.0, f64::max);
        let min_margin = trials.iter().map(|(_, l)| l.landauer_margin()).fold(f64::INFINITY, f64::min);
        let rows = trials
            .iter()
            .enumerate()
            .map(|(i, (b, l))| {
                record![
                    "trial" => i,
                    "beta" => *b,
                    "delta_s_system" => l.delta_s_system,
                    "heat_to_bath" => l.heat_to_bath,
                    "mutual_info" => l.mutual_info,
                    "rel_entropy_bath" => l.rel_entropy_bath,
                    "entropy_production" => l.entropy_production,
                    "residual" => l.residual,
                ]
            })
            .collect();
        let summary = record!["trials" => p.trials, "max_residual" => max_residual, "min_landauer_margin" => min_margin];
        Ok(ResultTable::from_records(rows, summary))
    }
}
