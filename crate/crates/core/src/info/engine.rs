//! Steady-state two-reservoir heat engine bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{domain, CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineReport {
    pub efficiency: f64,
    pub carnot: f64,
    pub entropy_production_rate: f64,
    /// |η − η_C − (T_c/Q̇_h)Σ̇|.
    pub identity_residual: f64,
    /// Σ̇ < −1e-12.
    pub second_law_violated: bool,
}

/// Efficiency and entropy production rate Σ̇ = Q̇_h/T_h + Q̇_c/T_c.
///
/// Heat currents are signed so that an engine has Q̇_h < 0 and Q̇_c > 0.
pub fn engine_efficiency(q_dot_h: f64, q_dot_c: f64, t_h: f64, t_c: f64) -> Result<EngineReport> {
    if !(t_c > 0.0 && t_h > t_c) {
        return domain(format!("need t_h > t_c > 0, got t_h = {t_h}, t_c = {t_c}"));
    }
    if q_dot_h == 0.0 {
        return Err(CoreError::Division("hot heat current is zero".into()));
    }
    let efficiency = 1.0 + q_dot_c / q_dot_h;
    let carnot = 1.0 - t_c / t_h;
    let entropy_production_rate = q_dot_h / t_h + q_dot_c / t_c;
    let identity_residual = (efficiency - carnot - t_c / q_dot_h * entropy_production_rate).abs();
    Ok(EngineReport {
        efficiency,
        carnot,
        entropy_production_rate,
        identity_residual,
        second_law_violated: entropy_production_rate < -1e-12,
    })
}
