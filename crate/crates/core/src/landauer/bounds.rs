//! Zero-temperature, finite-time, finite-size and single-shot refinements of the
//! erasure bound.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, CoreError, Result};
use crate::info::{von_neumann_entropy, DensityMatrix, InverseTemperature};
use crate::numeric::{bisect, integrate};

/// Environment heat capacity C(τ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeatCapacityModel {
    /// C(τ) = a·τ^exponent starting from the bath temperature `reference_temperature`.
    PowerLaw { a: f64, exponent: f64, reference_temperature: f64 },
}

impl HeatCapacityModel {
    pub fn phonon(a: f64) -> Self {
        Self::PowerLaw { a, exponent: 3.0, reference_temperature: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        let Self::PowerLaw { a, exponent, reference_temperature } = *self;
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("heat-capacity coefficient must be positive, got {a}"));
        }
        if !(exponent >= 0.0) {
            return domain(format!("heat-capacity exponent must be non-negative, got {exponent}"));
        }
        if !(reference_temperature >= 0.0) {
            return domain(format!("reference temperature must be non-negative, got {reference_temperature}"));
        }
        if exponent == 0.0 && reference_temperature == 0.0 {
            return domain("constant heat capacity has a divergent entropy integral from T = 0");
        }
        Ok(())
    }

    pub fn capacity(&self, t: f64) -> f64 {
        let Self::PowerLaw { a, exponent, .. } = *self;
        a * t.powf(exponent)
    }

    pub fn reference_temperature(&self) -> f64 {
        let Self::PowerLaw { reference_temperature, .. } = *self;
        reference_temperature
    }

    /// 𝒮(T′) = ∫_T^{T′} C(τ)/τ dτ in closed form.
    pub fn entropy_closed_form(&self, t_final: f64) -> f64 {
        let Self::PowerLaw { a, exponent: k, reference_temperature: t } = *self;
        if k == 0.0 {
            a * (t_final / t).ln()
        } else {
            a * (t_final.powf(k) - t.powf(k)) / k
        }
    }

    /// 𝒬(T′) = ∫_T^{T′} C(τ) dτ in closed form.
    pub fn heat_closed_form(&self, t_final: f64) -> f64 {
        let Self::PowerLaw { a, exponent: k, reference_temperature: t } = *self;
        a * (t_final.powf(k + 1.0) - t.powf(k + 1.0)) / (k + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTemperatureBound {
    /// 𝒬(T′) from quadrature.
    pub heat: f64,
    /// T′ with 𝒮(T′) = ΔS.
    pub final_temperature: f64,
    /// 𝒬 from the closed-form inversion, for cross-checking.
    pub closed_form: f64,
}

const QUAD_TOL: f64 = 1e-13;
const T_CEILING: f64 = 1e100;

/// Least heat for the environment to absorb entropy `delta_s` given its heat capacity:
/// 𝒬(𝒮⁻¹(ΔS)). Quadrature plus bisection, cross-checked against the closed form.
pub fn zero_temperature_bound(cap: HeatCapacityModel, delta_s: f64) -> Result<ZeroTemperatureBound> {
    cap.validate()?;
    if !(delta_s >= 0.0) {
        return domain(format!("entropy to absorb must be non-negative, got {delta_s}"));
    }
    let t0 = cap.reference_temperature();
    if delta_s == 0.0 {
        return Ok(ZeroTemperatureBound { heat: 0.0, final_temperature: t0, closed_form: 0.0 });
    }
    let entropy = |t1: f64| integrate(|tau| cap.capacity(tau) / tau, t0, t1, QUAD_TOL);
    let heat = |t1: f64| integrate(|tau| cap.capacity(tau), t0, t1, QUAD_TOL);

    let mut hi = if t0 > 0.0 { 2.0 * t0 } else { 1.0 };
    while cap.entropy_closed_form(hi) < delta_s {
        hi *= 2.0;
        if hi > T_CEILING {
            return Err(CoreError::UnreachableEntropy { requested: delta_s, attainable: cap.entropy_closed_form(T_CEILING) });
        }
    }
    let lo = if t0 > 0.0 { t0 } else { 0.0 };
    // Bracket in closed form first, then refine against quadrature.
    let t_final = bisect(|t1| entropy(t1) - delta_s, lo.max(hi * 1e-300), hi, 1e-10)
        .ok_or_else(|| CoreError::UnreachableEntropy { requested: delta_s, attainable: entropy(hi) })?;
    let t_closed = bisect(|t1| cap.entropy_closed_form(t1) - delta_s, lo.max(hi * 1e-300), hi, 1e-14).unwrap_or(t_final);

    // d𝒮/dT′ = C(T′)/T′ at the root.
    let h = 1e-6 * t_final;
    let slope = (cap.entropy_closed_form(t_final + h) - cap.entropy_closed_form(t_final - h)) / (2.0 * h);
    let expected = cap.capacity(t_final) / t_final;
    if (slope - expected).abs() > 1e-5 * expected.abs() {
        return crate::error::invariant("entropy derivative disagrees with C(T)/T");
    }
    Ok(ZeroTemperatureBound { heat: heat(t_final), final_temperature: t_final, closed_form: cap.heat_closed_form(t_closed) })
}

/// Proportionality constant of the Planckian dissipation time, τ_Pl = a·β in natural units.
pub const PLANCKIAN_ALPHA: f64 = 2.579_46;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "alpha", rename_all = "snake_case")]
pub enum AlphaModel {
    Explicit(f64),
    Planckian,
}

/// β⁻¹ ln 2 + α/τ.
pub fn finite_time_bound(tau: f64, beta: InverseTemperature, alpha: AlphaModel) -> Result<f64> {
    if !(tau > 0.0) {
        return domain(format!("duration must be positive, got {tau}"));
    }
    let a = match alpha {
        AlphaModel::Explicit(a) => a,
        AlphaModel::Planckian => PLANCKIAN_ALPHA,
    };
    Ok(LN_2 / beta.value() + a / tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteSizeBounds {
    /// (ΔS/ln d)²/n for a non-interacting bath of n particles.
    pub noninteracting: f64,
    /// 2ΔS²/(ln²(d−1) + 4), valid for any bath.
    pub universal: f64,
    /// 2(π/n)², the interacting-bath protocol value, for comparison.
    pub interacting_reference: f64,
    /// 1/(3n), the value quoted for a single qubit; present only for d = 2.
    pub quoted_qubit: Option<f64>,
    /// True when the quoted qubit value differs from `noninteracting`.
    pub discrepancy: bool,
}

pub fn finite_size_bounds(delta_s: f64, d: usize, n: usize) -> Result<FiniteSizeBounds> {
    if d < 2 || n < 1 {
        return domain(format!("need d ≥ 2 and n ≥ 1, got d = {d}, n = {n}"));
    }
    let nf = n as f64;
    let ln_d = (d as f64).ln();
    let noninteracting = (delta_s / ln_d).powi(2) / nf;
    let ln_dm1 = ((d - 1) as f64).ln();
    let universal = 2.0 * delta_s * delta_s / (ln_dm1 * ln_dm1 + 4.0);
    let quoted_qubit = (d == 2).then(|| 1.0 / (3.0 * nf));
    let discrepancy = quoted_qubit.is_some_and(|q| delta_s != 0.0 && (q - noninteracting).abs() > 1e-12 * noninteracting.abs().max(q));
    Ok(FiniteSizeBounds { noninteracting, universal, interacting_reference: 2.0 * (PI / nf).powi(2), quoted_qubit, discrepancy })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleShotBound {
    pub entropy_bits: f64,
    /// Variance of the surprisal in bits².
    pub variance_bits: f64,
    pub m_bits: f64,
    /// S + V/(2√M), the least battery size in qubits.
    pub bound_bits: f64,
}

/// Smallest information battery, in bits, that can erase `rho` in a single shot.
pub fn single_shot_battery_bound(rho: &DensityMatrix) -> SingleShotBound {
    let lambdas = rho.eigenvalues();
    let s_nats = von_neumann_entropy(rho);
    let second: f64 = lambdas.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln() * l.ln()).sum();
    let v_nats = (second - s_nats * s_nats).max(0.0);
    let entropy_bits = s_nats / LN_2;
    let variance_bits = v_nats / (LN_2 * LN_2);
    let m_bits = variance_bits + (entropy_bits + 1.0 / LN_2).powi(2);
    SingleShotBound { entropy_bits, variance_bits, m_bits, bound_bits: entropy_bits + variance_bits / (2.0 * m_bits.sqrt()) }
}

/// (N/β)[ln 2 − ln(1−ε)/N], the cost to distil N maximally mixed qubits to ε-close
/// ground states.
pub fn distillation_erasure_cost(n_copies: u64, epsilon: f64, beta: InverseTemperature) -> Result<f64> {
    if n_copies == 0 {
        return domain("need at least one copy");
    }
    if !(0.0..1.0).contains(&epsilon) {
        return domain(format!("error must lie in [0, 1), got {epsilon}"));
    }
    let n = n_copies as f64;
    Ok(n / beta.value() * (LN_2 - (1.0 - epsilon).ln() / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beta(b: f64) -> InverseTemperature {
        InverseTemperature::new(b).unwrap()
    }

    fn phonon_closed(ds: f64, a: f64) -> f64 {
        3f64.powf(4.0 / 3.0) / 4.0 * ds.powf(4.0 / 3.0) / a.cbrt()
    }

    #[test]
    fn phonon_bound_matches_closed_form() {
        for (ds, a) in [(LN_2, 1.0), (LN_2, 0.37), (0.1, 5.0), (3.0, 2.0)] {
            let r = zero_temperature_bound(HeatCapacityModel::phonon(a), ds).unwrap();
            assert_relative_eq!(r.heat, phonon_closed(ds, a), max_relative = 1e-8);
            assert_relative_eq!(r.closed_form, phonon_closed(ds, a), max_relative = 1e-12);
        }
        assert_eq!(zero_temperature_bound(HeatCapacityModel::phonon(1.0), 0.0).unwrap().heat, 0.0);
    }

    #[test]
    fn small_entropy_reduces_to_landauer() {
        let t = 0.5;
        let cap = HeatCapacityModel::PowerLaw { a: 2.0, exponent: 1.0, reference_temperature: t };
        let ds = 1e-3;
        let r = zero_temperature_bound(cap, ds).unwrap();
        assert!((r.heat / (t * ds) - 1.0).abs() < 0.02);
        assert!(r.heat >= t * ds);
    }

    #[test]
    fn unreachable_entropy_is_reported() {
        let cap = HeatCapacityModel::PowerLaw { a: 1e-200, exponent: 3.0, reference_temperature: 0.0 };
        assert!(matches!(zero_temperature_bound(cap, 1e120), Err(CoreError::UnreachableEntropy { .. })));
        assert!(zero_temperature_bound(HeatCapacityModel::phonon(-1.0), 1.0).is_err());
    }

    #[test]
    fn finite_time_examples() {
        assert_relative_eq!(finite_time_bound(1e15, beta(1.0), AlphaModel::Explicit(1.0)).unwrap(), LN_2, epsilon = 1e-14);
        assert_relative_eq!(finite_time_bound(10.0, beta(1.0), AlphaModel::Explicit(1.0)).unwrap(), LN_2 + 0.1, epsilon = 1e-15);
        assert_relative_eq!(finite_time_bound(100.0, beta(1.0), AlphaModel::Planckian).unwrap(), LN_2 + 0.025_794_6, epsilon = 1e-15);
        assert!(finite_time_bound(0.0, beta(1.0), AlphaModel::Planckian).is_err());
    }

    #[test]
    fn finite_size_examples() {
        let z = finite_size_bounds(0.0, 2, 5).unwrap();
        assert_eq!((z.noninteracting, z.universal), (0.0, 0.0));
        assert!(!z.discrepancy);
        let q = finite_size_bounds(LN_2, 2, 10).unwrap();
        assert_relative_eq!(q.noninteracting, 0.1, epsilon = 1e-15);
        assert_relative_eq!(q.universal, 2.0 * LN_2 * LN_2 / 4.0, epsilon = 1e-15);
        assert_relative_eq!(q.universal, 0.240_226_506_959_100_7, epsilon = 1e-15);
        assert_relative_eq!(q.interacting_reference, 2.0 * (PI / 10.0).powi(2), epsilon = 1e-15);
        assert_eq!(q.quoted_qubit, Some(1.0 / 30.0));
        assert!(q.discrepancy);
        // 1/n scaling and n-independence
        let q20 = finite_size_bounds(LN_2, 2, 20).unwrap();
        assert_relative_eq!(q20.noninteracting * 2.0, q.noninteracting, epsilon = 1e-15);
        assert_eq!(q20.universal, q.universal);
        assert!(finite_size_bounds(1.0, 1, 1).is_err());
    }

    #[test]
    fn single_shot_examples() {
        let mixed = single_shot_battery_bound(&DensityMatrix::maximally_mixed(2));
        assert_eq!(mixed.variance_bits, 0.0);
        assert_relative_eq!(mixed.bound_bits, 1.0, epsilon = 1e-15);
        let pure = single_shot_battery_bound(&DensityMatrix::basis(3, 1).unwrap());
        assert_eq!(pure.bound_bits, 0.0);
        let skew = single_shot_battery_bound(&DensityMatrix::diagonal(&[0.9, 0.1]).unwrap());
        // mpmath: S, V in bits for (0.9, 0.1)
        assert_relative_eq!(skew.entropy_bits, 0.468_995_593_589_281_2, epsilon = 1e-14);
        assert_relative_eq!(skew.variance_bits, 0.904_358_206_329_213_96, epsilon = 1e-13);
        assert_relative_eq!(skew.bound_bits, 0.680_772_956_660_431_0, epsilon = 1e-13);
        assert!(skew.bound_bits >= skew.entropy_bits);
    }

    #[test]
    fn distillation_examples() {
        assert_eq!(distillation_erasure_cost(1, 0.0, beta(1.0)).unwrap(), LN_2);
        assert_eq!(distillation_erasure_cost(7, 0.0, beta(2.0)).unwrap(), 7.0 * LN_2 / 2.0);
        assert_relative_eq!(distillation_erasure_cost(1, 0.5, beta(1.0)).unwrap(), 2.0 * LN_2, epsilon = 1e-15);
        let per_copy = distillation_erasure_cost(1_000_000, 0.3, beta(1.0)).unwrap() / 1e6;
        assert!((per_copy - LN_2).abs() < 1e-6);
        assert!(distillation_erasure_cost(1, 1.0, beta(1.0)).is_err());
    }
}
