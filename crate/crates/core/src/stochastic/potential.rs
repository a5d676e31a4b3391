use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Piecewise-linear function of time through the given knots; constant outside them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    knots: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return domain("schedule needs at least one knot");
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return domain("schedule knots must be finite");
        }
        if knots.windows(2).any(|w| w[1].0 < w[0].0) {
            return domain("schedule knot times must be non-decreasing");
        }
        Ok(Self { knots })
    }

    pub fn constant(v: f64) -> Self {
        Self { knots: vec![(0.0, v)] }
    }

    pub fn linear(t0: f64, v0: f64, t1: f64, v1: f64) -> Result<Self> {
        Self::new(vec![(t0, v0), (t1, v1)])
    }

    pub fn value(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        let last = k[k.len() - 1];
        if t >= last.0 {
            return last.1;
        }
        let i = k.partition_point(|&(tk, _)| tk <= t);
        let (t0, v0) = k[i - 1];
        let (t1, v1) = k[i];
        if t1 == t0 {
            return v1;
        }
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    pub fn start(&self) -> f64 {
        self.knots[0].1
    }

    pub fn end(&self) -> f64 {
        self.knots[self.knots.len() - 1].1
    }

    pub fn min(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.knots.iter().all(|k| k.1 == self.knots[0].1)
    }
}

/// Time-dependent one-dimensional potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// U = b(t)((x/x_m)² − 1)² − f(t)·x with reflecting walls at ±2x_m.
    DoubleWell { barrier: Schedule, separation: f64, tilt: Schedule },
    /// U = k(t)x²/2.
    Harmonic { stiffness: Schedule },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::DoubleWell { barrier, separation, .. } => {
                if !(*separation > 0.0) {
                    return domain("well separation must be positive");
                }
                if barrier.min() < 0.0 {
                    return domain("barrier height must be non-negative");
                }
            }
            PotentialSpec::Harmonic { stiffness } => {
                if stiffness.min() < 0.0 {
                    return domain("stiffness must be non-negative");
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn energy(&self, x: f64, t: f64) -> f64 {
        match self {
            PotentialSpec::DoubleWell { barrier, separation, tilt } => {
                let y = x / separation;
                let s = y * y - 1.0;
                barrier.value(t) * s * s - tilt.value(t) * x
            }
            PotentialSpec::Harmonic { stiffness } => 0.5 * stiffness.value(t) * x * x,
        }
    }

    /// ∂U/∂x.
    #[inline]
    pub fn gradient(&self, x: f64, t: f64) -> f64 {
        match self {
            PotentialSpec::DoubleWell { barrier, separation, tilt } => {
                let y = x / separation;
                4.0 * barrier.value(t) * y * (y * y - 1.0) / separation - tilt.value(t)
            }
            PotentialSpec::Harmonic { stiffness } => stiffness.value(t) * x,
        }
    }

    /// Largest |∂²U/∂x²| over the schedule on the region the particle explores.
    pub fn max_curvature(&self) -> f64 {
        match self {
            // at |x| = 1.5 x_m: 4b(3·2.25 − 1)/x_m²
            PotentialSpec::DoubleWell { barrier, separation, .. } => 23.0 * barrier.max() / (separation * separation),
            PotentialSpec::Harmonic { stiffness } => stiffness.max(),
        }
    }

    /// Reflecting boundary |x| ≤ wall, if any.
    pub fn wall(&self) -> Option<f64> {
        match self {
            PotentialSpec::DoubleWell { separation, .. } => Some(2.0 * separation),
            PotentialSpec::Harmonic { .. } => None,
        }
    }

    /// Positions beyond this magnitude signal numerical divergence.
    pub fn divergence_bound(&self, kt: f64) -> f64 {
        match self {
            PotentialSpec::DoubleWell { separation, .. } => 10.0 * separation,
            PotentialSpec::Harmonic { stiffness } => {
                let k = stiffness.min();
                if k > 0.0 {
                    (100.0 * (kt / k).sqrt()).max(1e3)
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn schedule_interpolates() {
        let s = Schedule::new(vec![(0.0, 8.0), (3.0, 2.0), (5.0, 2.0), (8.0, 8.0)]).unwrap();
        assert_eq!(s.value(-1.0), 8.0);
        assert_relative_eq!(s.value(1.5), 5.0, epsilon = 1e-15);
        assert_eq!(s.value(4.0), 2.0);
        assert_relative_eq!(s.value(6.5), 5.0, epsilon = 1e-15);
        assert_eq!(s.value(100.0), 8.0);
        assert!(Schedule::new(vec![(1.0, 0.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let u = PotentialSpec::DoubleWell { barrier: Schedule::constant(3.0), separation: 0.8, tilt: Schedule::constant(0.7) };
        for x in [-1.3, -0.2, 0.4, 1.1] {
            let h = 1e-6;
            let fd = (u.energy(x + h, 0.0) - u.energy(x - h, 0.0)) / (2.0 * h);
            assert_relative_eq!(u.gradient(x, 0.0), fd, max_relative = 1e-8);
        }
    }

    #[test]
    fn double_well_minima_and_barrier() {
        let u = PotentialSpec::DoubleWell { barrier: Schedule::constant(8.0), separation: 1.0, tilt: Schedule::constant(0.0) };
        assert_eq!(u.energy(1.0, 0.0), 0.0);
        assert_eq!(u.energy(-1.0, 0.0), 0.0);
        assert_eq!(u.energy(0.0, 0.0), 8.0);
        assert_eq!(u.gradient(1.0, 0.0), 0.0);
        assert_eq!(u.max_curvature(), 184.0);
    }
}
