use rand::Rng as _;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::measurement::MeasurementModel;
use crate::error::{domain, Result};
use crate::info::ProbDist;
use crate::numeric::{batch_means, Estimate};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeedbackMode {
    None,
    Periodic,
    /// Measure after every jump.
    EveryJump,
}

/// Ladder with level energies n·step_energy. A block at level b adds `block_height`·(b − n) to
/// every level n below b; a jump changing that penalty by ΔV has its rate scaled by e^{−βΔV/2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseConfig {
    pub step_energy: f64,
    pub rate_up: f64,
    pub rate_down: f64,
    pub kt: f64,
    pub block_height: f64,
    pub feedback_period: f64,
    pub mode: FeedbackMode,
    /// Binary channel on "has the particle climbed above the block".
    pub meas: MeasurementModel,
}

impl StaircaseConfig {
    /// Detailed-balance rates with unit downward rate.
    pub fn standard(step_energy: f64, kt: f64, feedback_period: f64, mode: FeedbackMode, meas: MeasurementModel) -> Self {
        Self { step_energy, rate_up: (-step_energy / kt).exp(), rate_down: 1.0, kt, block_height: 6.0 * kt, feedback_period, mode, meas }
    }

    fn validate(&self) -> Result<()> {
        if !(self.kt > 0.0 && self.rate_up > 0.0 && self.rate_down > 0.0) {
            return domain("kT and rates must be positive");
        }
        let db = (self.rate_up / self.rate_down).ln() + self.step_energy / self.kt;
        if db.abs() > 1e-10 {
            return domain(format!("rates violate detailed balance: ln(up/down) + βΔE = {db:.3e}"));
        }
        if self.meas.n_states() != 2 || self.meas.n_outcomes() != 2 {
            return domain("ratchet measurement must be binary");
        }
        if !(self.block_height > 0.0) {
            return domain("block height must be positive");
        }
        if self.block_height.is_infinite() && (self.meas.prob(1, 0) > 0.0) {
            return domain("a hard block cannot be raised onto the particle; use a finite block height with noisy measurements");
        }
        if self.mode == FeedbackMode::Periodic && !(self.feedback_period > 0.0) {
            return domain("feedback period must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseReport {
    pub n_ticks: usize,
    pub elapsed: f64,
    /// Levels per unit time.
    pub mean_velocity: f64,
    pub velocity_se: f64,
    /// (step_energy·Δn − demon work) per tick.
    pub gain_per_tick: f64,
    pub gain_se: f64,
    pub demon_work_per_tick: f64,
    /// I(X:M) per measurement from the observed P(X = above).
    pub info_per_tick: f64,
    pub p_above: f64,
    /// gain_per_tick ≤ kT·info_per_tick + 3·SE.
    pub bound_ok: bool,
    /// Level never decreased.
    pub monotone: bool,
}

/// Simulate `n_steps` ticks of the feedback ladder. A tick is one feedback period, or one jump
/// in [`FeedbackMode::EveryJump`] (also one jump-free period of length `feedback_period` when
/// feedback is off).
pub fn staircase_ratchet(cfg: &StaircaseConfig, n_steps: usize, seed: u64) -> Result<StaircaseReport> {
    cfg.validate()?;
    if n_steps < 2 {
        return domain("need at least two ticks");
    }
    let beta = 1.0 / cfg.kt;
    let v = cfg.block_height;
    let pen = |n: i64, b: i64| if n < b { v * (b - n) as f64 } else { 0.0 };
    let scale = |dv: f64| if dv == 0.0 { 1.0 } else { (-beta * dv / 2.0).exp() };
    let mut rng = stream(seed, 0);

    let mut n: i64 = 0;
    let mut block: i64 = if cfg.mode == FeedbackMode::None { i64::MIN } else { 0 };
    let mut t = 0.0;
    let mut monotone = true;
    let mut gains = Vec::with_capacity(n_steps);
    let mut moves = Vec::with_capacity(n_steps);
    let mut works = Vec::with_capacity(n_steps);
    let mut durations = Vec::with_capacity(n_steps);
    let mut above = 0usize;
    let mut measured = 0usize;

    let jump = |n: &mut i64, block: i64, rng: &mut crate::rng::Rng| -> f64 {
        let up = cfg.rate_up * scale(pen(*n + 1, block) - pen(*n, block));
        let down = cfg.rate_down * scale(pen(*n - 1, block) - pen(*n, block));
        let total = up + down;
        let wait: f64 = rng.sample::<f64, _>(Exp1) / total;
        if rng.random::<f64>() * total < up {
            *n += 1;
        } else {
            *n -= 1;
        }
        wait
    };

    for _ in 0..n_steps {
        let n_start = n;
        let t_start = t;
        match cfg.mode {
            FeedbackMode::EveryJump => {
                let prev = n;
                t += jump(&mut n, block, &mut rng);
                monotone &= n >= prev;
            }
            FeedbackMode::None | FeedbackMode::Periodic => {
                let end = t + cfg.feedback_period;
                loop {
                    let up = cfg.rate_up * scale(pen(n + 1, block) - pen(n, block));
                    let down = cfg.rate_down * scale(pen(n - 1, block) - pen(n, block));
                    let wait: f64 = rng.sample::<f64, _>(Exp1) / (up + down);
                    if t + wait > end {
                        break;
                    }
                    t += wait;
                    let prev = n;
                    n += if rng.random::<f64>() * (up + down) < up { 1 } else { -1 };
                    monotone &= n >= prev;
                }
                t = end;
            }
        }
        let mut work = 0.0;
        if cfg.mode != FeedbackMode::None {
            let x = usize::from(n > block);
            above += x;
            measured += 1;
            let m = usize::from(rng.random::<f64>() < cfg.meas.prob(1, x));
            if m == 1 {
                work = pen(n, block + 1) - pen(n, block);
                block += 1;
            }
        }
        gains.push(cfg.step_energy * (n - n_start) as f64 - work);
        moves.push((n - n_start) as f64);
        works.push(work);
        durations.push(t - t_start);
    }

    let batches = 50;
    let gain = batch_means(&gains, batches);
    let elapsed = t;
    let moved = batch_means(&moves, batches);
    let mean_dt = Estimate::from_samples(&durations).mean;
    let p_above = if measured > 0 { above as f64 / measured as f64 } else { 0.0 };
    let info = if cfg.mode == FeedbackMode::None { 0.0 } else { cfg.meas.mutual_information(&ProbDist::normalized(vec![1.0 - p_above, p_above])?)? };
    Ok(StaircaseReport {
        n_ticks: n_steps,
        elapsed,
        mean_velocity: moved.mean / mean_dt,
        velocity_se: moved.se / mean_dt,
        gain_per_tick: gain.mean,
        gain_se: gain.se,
        demon_work_per_tick: Estimate::from_samples(&works).mean,
        info_per_tick: info,
        p_above,
        bound_ok: gain.mean <= cfg.kt * info + 3.0 * gain.se,
        monotone,
    })
}
