//! Discrete spectra, Gibbs states, partition functions and free energies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dist::{entropy_of_weights, ProbDist};
use super::state::{hermitian_eigen, hermiticity_defect, relative_entropy, von_neumann_entropy, CMatrix, DensityMatrix};
use crate::error::{domain, CoreError, Result};

/// Energy levels with explicit degeneracies, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    levels: Vec<f64>,
    degeneracies: Vec<u64>,
}

impl SpectrumModel {
    pub fn new(levels: Vec<f64>, degeneracies: Vec<u64>) -> Result<Self> {
        if levels.is_empty() {
            return domain("empty spectrum");
        }
        if levels.len() != degeneracies.len() {
            return domain("levels and degeneracies differ in length");
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return domain("non-finite energy level");
        }
        if degeneracies.contains(&0) {
            return domain("degeneracy must be at least 1");
        }
        let mut pairs: Vec<(f64, u64)> = levels.into_iter().zip(degeneracies).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (levels, degeneracies) = pairs.into_iter().unzip();
        Ok(Self { levels, degeneracies })
    }

    pub fn nondegenerate(levels: Vec<f64>) -> Result<Self> {
        let n = levels.len();
        Self::new(levels, vec![1; n])
    }

    /// Two levels {0, gap}.
    pub fn qubit(gap: f64) -> Result<Self> {
        Self::nondegenerate(vec![0.0, gap])
    }

    /// (n + ½)ω for n = 0..n_levels.
    pub fn harmonic(omega: f64, n_levels: usize) -> Result<Self> {
        Self::nondegenerate((0..n_levels).map(|n| (n as f64 + 0.5) * omega).collect())
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn degeneracies(&self) -> &[u64] {
        &self.degeneracies
    }

    /// Hilbert-space dimension Σ g_n.
    pub fn dim(&self) -> usize {
        self.degeneracies.iter().sum::<u64>() as usize
    }

    /// Diagonal Hamiltonian with each level repeated by its degeneracy.
    pub fn matrix(&self) -> CMatrix {
        let diag: Vec<f64> = self.expanded_levels();
        let d = diag.len();
        CMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn expanded_levels(&self) -> Vec<f64> {
        self.levels
            .iter()
            .zip(&self.degeneracies)
            .flat_map(|(&e, &g)| std::iter::repeat_n(e, g as usize))
            .collect()
    }
}

/// β = 1/T. `+∞` is a valid value and denotes the ground-state limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta <= 0.0 {
            return domain(format!("inverse temperature must be positive, got {beta}"));
        }
        Ok(Self(beta))
    }

    pub fn from_temperature(t: f64) -> Result<Self> {
        if t.is_nan() || t <= 0.0 {
            return domain(format!("temperature must be positive, got {t}"));
        }
        Self::new(1.0 / t)
    }

    pub fn ground_state() -> Self {
        Self(f64::INFINITY)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    fn require_finite(self) -> Result<f64> {
        if self.is_finite() {
            Ok(self.0)
        } else {
            domain("quantity undefined at infinite inverse temperature")
        }
    }
}

impl TryFrom<f64> for InverseTemperature {
    type Error = CoreError;
    fn try_from(b: f64) -> Result<Self> {
        Self::new(b)
    }
}

impl From<InverseTemperature> for f64 {
    fn from(b: InverseTemperature) -> f64 {
        b.0
    }
}

/// Boltzmann weights per level (degeneracy included) relative to the ground level,
/// so the largest exponent is zero.
fn shifted_weights(h: &SpectrumModel, beta: InverseTemperature) -> Vec<f64> {
    let e0 = h.levels[0];
    h.levels
        .iter()
        .zip(&h.degeneracies)
        .map(|(&e, &g)| {
            let gap = e - e0;
            let boltz = if beta.is_finite() {
                (-beta.0 * gap).exp()
            } else if gap == 0.0 {
                1.0
            } else {
                0.0
            };
            g as f64 * boltz
        })
        .collect()
}

/// Per-level occupation probabilities (summed over degenerate states).
pub fn level_populations(h: &SpectrumModel, beta: InverseTemperature) -> ProbDist {
    ProbDist::normalized(shifted_weights(h, beta)).expect("ground weight is positive")
}

/// Per-state Gibbs distribution over the expanded basis.
pub fn gibbs_distribution(h: &SpectrumModel, beta: InverseTemperature) -> ProbDist {
    let pops = level_populations(h, beta);
    let w = pops
        .weights()
        .iter()
        .zip(&h.degeneracies)
        .flat_map(|(&p, &g)| std::iter::repeat_n(p / g as f64, g as usize))
        .collect();
    ProbDist::normalized(w).expect("populations are normalised")
}

/// Diagonal Gibbs state e^{−βH}/Z.
pub fn gibbs_state(h: &SpectrumModel, beta: InverseTemperature) -> DensityMatrix {
    DensityMatrix::diagonal(gibbs_distribution(h, beta).weights()).expect("Gibbs populations form a state")
}

/// Gibbs state of a Hermitian matrix Hamiltonian.
pub fn gibbs_state_matrix(h: &CMatrix, beta: InverseTemperature) -> Result<DensityMatrix> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(CoreError::Shape { expected: "non-empty square Hamiltonian".into(), found: format!("{}x{}", h.nrows(), h.ncols()) });
    }
    if hermiticity_defect(h) > 1e-12 {
        return crate::error::invariant("Hamiltonian not Hermitian");
    }
    let (vals, vecs) = hermitian_eigen(h);
    let spectrum = SpectrumModel::nondegenerate(vals)?;
    let p = gibbs_distribution(&spectrum, beta);
    let d = h.nrows();
    let mut rho = CMatrix::zeros(d, d);
    for (k, &pk) in p.weights().iter().enumerate() {
        let v = vecs.column(k);
        rho += (v * v.adjoint()).scale(pk);
    }
    DensityMatrix::from_noisy(rho, vec![d])
}

/// ln Z = −β ε₀ + ln Σ g_n e^{−β(ε_n − ε₀)}.
pub fn ln_partition_function(h: &SpectrumModel, beta: InverseTemperature) -> Result<f64> {
    let b = beta.require_finite()?;
    let w: f64 = shifted_weights(h, beta).iter().sum();
    Ok(-b * h.levels[0] + w.ln())
}

pub fn partition_function(h: &SpectrumModel, beta: InverseTemperature) -> Result<f64> {
    Ok(ln_partition_function(h, beta)?.exp())
}

/// ⟨E⟩ = Σ p_n ε_n.
pub fn average_energy(h: &SpectrumModel, beta: InverseTemperature) -> f64 {
    level_populations(h, beta).weights().iter().zip(&h.levels).map(|(p, e)| p * e).sum()
}

/// S = β⟨E⟩ + ln Z; the ground-state degeneracy entropy at β = ∞.
pub fn thermal_entropy(h: &SpectrumModel, beta: InverseTemperature) -> f64 {
    if !beta.is_finite() {
        return (h.degeneracies[0] as f64).ln();
    }
    let b = beta.0;
    let e0 = h.levels[0];
    let w = shifted_weights(h, beta);
    let z: f64 = w.iter().sum();
    let mean_gap: f64 = w.iter().zip(&h.levels).map(|(wi, e)| wi * (e - e0)).sum::<f64>() / z;
    // shift-invariant form of βE + ln Z
    b * mean_gap + z.ln()
}

/// Shannon entropy of the per-state Gibbs distribution (cross-check of `thermal_entropy`).
pub fn gibbs_shannon_entropy(h: &SpectrumModel, beta: InverseTemperature) -> f64 {
    entropy_of_weights(gibbs_distribution(h, beta).weights())
}

/// F_eq = −β⁻¹ ln Z.
pub fn equilibrium_free_energy(h: &SpectrumModel, beta: InverseTemperature) -> Result<f64> {
    Ok(-ln_partition_function(h, beta)? / beta.0)
}

/// 𝓕(ρ) = tr(ρH) − S(ρ)/β.
pub fn noneq_free_energy(rho: &DensityMatrix, h: &CMatrix, beta: InverseTemperature) -> Result<f64> {
    let b = beta.require_finite()?;
    if h.nrows() != rho.dim() || h.ncols() != rho.dim() {
        return Err(CoreError::Shape { expected: format!("{0}x{0} Hamiltonian", rho.dim()), found: format!("{}x{}", h.nrows(), h.ncols()) });
    }
    Ok(rho.expectation(h) - von_neumann_entropy(rho) / b)
}

/// β⁻¹ S(ρ‖γ) − β⁻¹ ln Z, the relative-entropy form of 𝓕(ρ).
pub fn noneq_free_energy_via_relative_entropy(rho: &DensityMatrix, h: &CMatrix, beta: InverseTemperature) -> Result<f64> {
    let b = beta.require_finite()?;
    let gamma = gibbs_state_matrix(h, beta)?;
    let (vals, _) = hermitian_eigen(h);
    let ln_z = ln_partition_function(&SpectrumModel::nondegenerate(vals)?, beta)?;
    Ok((relative_entropy(rho, &gamma)? - ln_z) / b)
}
