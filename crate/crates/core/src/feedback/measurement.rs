use serde::{Deserialize, Serialize};

use crate::error::{domain, invariant, Result};
use crate::info::{mutual_information_classical, JointDist, ProbDist};

pub const COLUMN_TOL: f64 = 1e-12;
pub const DISTURBANCE_TOL: f64 = 1e-10;

/// Classical measurement channel p(m|x), stored with one row per system state x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MeasurementModel {
    conditional: Vec<Vec<f64>>,
}

impl TryFrom<Vec<Vec<f64>>> for MeasurementModel {
    type Error = crate::CoreError;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MeasurementModel> for Vec<Vec<f64>> {
    fn from(m: MeasurementModel) -> Self {
        m.conditional
    }
}

impl MeasurementModel {
    pub fn new(conditional: Vec<Vec<f64>>) -> Result<Self> {
        let n_m = conditional.first().map_or(0, Vec::len);
        if conditional.is_empty() || n_m == 0 {
            return domain("measurement needs at least one state and one outcome");
        }
        for (x, row) in conditional.iter().enumerate() {
            if row.len() != n_m {
                return domain(format!("row {x} has {} outcomes, expected {n_m}", row.len()));
            }
            if row.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
                return domain(format!("p(m|x={x}) has a negative or non-finite entry"));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > COLUMN_TOL {
                return domain(format!("p(m|x={x}) sums to {s}"));
            }
        }
        Ok(Self { conditional })
    }

    /// Binary measurement that reports the wrong bit with probability `error`.
    pub fn binary_symmetric(error: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&error) {
            return domain(format!("error probability must lie in [0, 1], got {error}"));
        }
        Self::new(vec![vec![1.0 - error, error], vec![error, 1.0 - error]])
    }

    pub fn perfect(n: usize) -> Result<Self> {
        Self::new((0..n).map(|x| (0..n).map(|m| if m == x { 1.0 } else { 0.0 }).collect()).collect())
    }

    /// Outcome distribution independent of the state.
    pub fn uninformative(n_states: usize, outcomes: &ProbDist) -> Result<Self> {
        Self::new(vec![outcomes.weights().to_vec(); n_states])
    }

    pub fn n_states(&self) -> usize {
        self.conditional.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.conditional[0].len()
    }

    pub fn conditional(&self) -> &[Vec<f64>] {
        &self.conditional
    }

    pub fn prob(&self, m: usize, x: usize) -> f64 {
        self.conditional[x][m]
    }

    /// Symmetric flip probability when the model is a binary symmetric channel.
    pub fn bsc_error(&self) -> Option<f64> {
        let c = &self.conditional;
        (c.len() == 2 && c[0].len() == 2 && (c[0][1] - c[1][0]).abs() <= COLUMN_TOL).then_some(c[0][1])
    }

    pub fn joint(&self, prior: &ProbDist) -> Result<JointDist> {
        if prior.len() != self.n_states() {
            return domain(format!("prior has {} states, measurement expects {}", prior.len(), self.n_states()));
        }
        JointDist::from_channel(prior, &self.conditional)
    }

    /// Outcome distribution p_M and posteriors ρ_{X|M}(·|m); outcomes of zero probability get
    /// the prior as posterior.
    pub fn posteriors(&self, prior: &ProbDist) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let joint = self.joint(prior)?;
        let (nx, nm) = joint.shape();
        let pm: Vec<f64> = (0..nm).map(|m| (0..nx).map(|x| joint.get(x, m)).sum()).collect();
        let post = (0..nm)
            .map(|m| if pm[m] > 0.0 { (0..nx).map(|x| joint.get(x, m) / pm[m]).collect() } else { prior.weights().to_vec() })
            .collect();
        Ok((pm, post))
    }

    /// max_x |Σ_m p_M(m)·ρ_{X|M}(x|m) − ρ_X(x)|.
    pub fn disturbance_defect(&self, prior: &ProbDist) -> Result<f64> {
        let (pm, post) = self.posteriors(prior)?;
        Ok((0..prior.len())
            .map(|x| ((0..pm.len()).map(|m| pm[m] * post[m][x]).sum::<f64>() - prior.weights()[x]).abs())
            .fold(0.0, f64::max))
    }

    pub fn mutual_information(&self, prior: &ProbDist) -> Result<f64> {
        let defect = self.disturbance_defect(prior)?;
        if defect > DISTURBANCE_TOL {
            return invariant(format!("measurement disturbs the prior by {defect:.3e}"));
        }
        Ok(mutual_information_classical(&self.joint(prior)?).max(0.0))
    }
}

/// Free-energy gain kT·I(X:M) of measuring a system with distribution `prior`.
pub fn measurement_gain(prior: &ProbDist, meas: &MeasurementModel, kt: f64) -> Result<f64> {
    if !(kt >= 0.0) {
        return domain(format!("temperature must be non-negative, got {kt}"));
    }
    Ok(kt * meas.mutual_information(prior)?)
}

/// Least admissible feedback work Δ𝓕 − kT·I.
pub fn feedback_bound(delta_f: f64, i_xm: f64, kt: f64) -> f64 {
    delta_f - kt * i_xm
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackLedger {
    pub w_meas: f64,
    pub w_fb: f64,
    pub w_reset: f64,
    pub w_tot: f64,
    pub i_xm: f64,
    /// Free-energy change of the memory during measurement.
    pub delta_f_y: f64,
    /// Free-energy change of the system over the cycle.
    pub delta_f: f64,
}

impl FeedbackLedger {
    pub fn identity_defect(&self) -> f64 {
        (self.w_meas + self.w_fb + self.w_reset - self.w_tot).abs()
    }
}

/// Work ledger of a cyclic measure–feedback–reset process with every step at its bound.
pub fn szilard_cycle_ledger(prior: &ProbDist, meas: &MeasurementModel, delta_f_y: f64, kt: f64) -> Result<FeedbackLedger> {
    szilard_cycle_ledger_with_slack(prior, meas, delta_f_y, kt, [0.0; 3])
}

/// As [`szilard_cycle_ledger`], with non-negative excess work added to the measurement,
/// feedback and reset steps.
pub fn szilard_cycle_ledger_with_slack(prior: &ProbDist, meas: &MeasurementModel, delta_f_y: f64, kt: f64, slack: [f64; 3]) -> Result<FeedbackLedger> {
    if slack.iter().any(|s| !(*s >= 0.0)) {
        return domain("sub-process slack must be non-negative");
    }
    let i_xm = meas.mutual_information(prior)?;
    let delta_f = 0.0;
    let w_meas = delta_f_y + kt * i_xm + slack[0];
    let w_fb = feedback_bound(delta_f, i_xm, kt) + slack[1];
    let w_reset = -delta_f_y + slack[2];
    Ok(FeedbackLedger { w_meas, w_fb, w_reset, w_tot: w_meas + w_fb + w_reset, i_xm, delta_f_y, delta_f })
}
