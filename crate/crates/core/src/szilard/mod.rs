//! Classical and quantum Szilard engines: particles in a 1D box with a movable wall.
//!
//! Single-particle levels are ε_n(ℓ) = π²n²/(2mℓ²). The k-particle partition
//! functions are exact sums over symmetrised (bosons), antisymmetrised (fermions) or
//! Gibbs-corrected (Boltzmann) occupations of the first `n_max` levels.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, CoreError, Result};
use crate::info::{InverseTemperature, ProbDist, SpectrumModel};
use crate::numeric::{bisect, log_sum_exp};

pub const MAX_PARTICLES: usize = 3;
pub const MIN_LEVELS: usize = 50;
pub const TAIL_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistics {
    Boltzmann,
    Boson,
    Fermion,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [Statistics::Boltzmann, Statistics::Boson, Statistics::Fermion];

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boltzmann => "boltzmann",
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boltzmann" => Ok(Self::Boltzmann),
            "boson" => Ok(Self::Boson),
            "fermion" => Ok(Self::Fermion),
            other => domain(format!("unknown statistics {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    length: f64,
    mass: f64,
    n_particles: usize,
    statistics: Statistics,
    n_max: usize,
}

impl BoxSpec {
    pub fn new(length: f64, mass: f64, n_particles: usize, statistics: Statistics, n_max: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) || !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("length and mass must be positive, got L = {length}, m = {mass}"));
        }
        if !(1..=MAX_PARTICLES).contains(&n_particles) {
            return domain(format!("particle number must be in 1..={MAX_PARTICLES}, got {n_particles}"));
        }
        if n_max < MIN_LEVELS {
            return domain(format!("n_max must be at least {MIN_LEVELS}, got {n_max}"));
        }
        Ok(Self { length, mass, n_particles, statistics, n_max })
    }

    /// Unit box at β = 1 with βε₁(L) = `reduced`, and a cutoff that meets the tail bound.
    pub fn for_reduced_temperature(n_particles: usize, statistics: Statistics, reduced: f64) -> Result<(Self, InverseTemperature)> {
        if !(reduced > 0.0 && reduced.is_finite()) {
            return domain(format!("βε₁ must be positive, got {reduced}"));
        }
        let mass = PI * PI / (2.0 * reduced);
        // e^{−βε₁(n² − 1)} < 1e-12 at the full length
        let n_max = ((1.0 + 27.7 / reduced).sqrt().ceil() as usize + 1).max(MIN_LEVELS);
        Ok((Self::new(1.0, mass, n_particles, statistics, n_max)?, InverseTemperature::new(1.0)?))
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::new(self.length, self.mass, self.n_particles, self.statistics, n_max)
    }

    /// ε₁ of a segment of length ℓ.
    pub fn ground_energy(&self, segment: f64) -> f64 {
        PI * PI / (2.0 * self.mass * segment * segment)
    }

    /// Fails when the weight beyond the cutoff, e^{−β(ε_{n_max} − ε₁)} relative to the
    /// ground term at full length, exceeds 1e-10.
    pub fn check_cutoff(&self, beta: InverseTemperature) -> Result<()> {
        if !beta.is_finite() {
            return Ok(());
        }
        let e1 = self.ground_energy(self.length);
        let n = self.n_max as f64;
        let tail_log = -beta.value() * e1 * (n * n - 1.0) - ln_single(self, self.length, beta.value()).1;
        let tail = tail_log.exp();
        if tail > TAIL_LIMIT {
            return Err(CoreError::Cutoff { n_max: self.n_max, tail, limit: TAIL_LIMIT });
        }
        Ok(())
    }
}

/// Movable wall at distance `position` from the left end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallConfig {
    position: f64,
}

impl WallConfig {
    pub fn new(position: f64, bx: &BoxSpec) -> Result<Self> {
        if !(position > 0.0 && position < bx.length) {
            return domain(format!("wall position {position} outside (0, {})", bx.length));
        }
        Ok(Self { position })
    }

    pub fn fraction(fraction: f64, bx: &BoxSpec) -> Result<Self> {
        Self::new(fraction * bx.length, bx)
    }

    pub fn position(&self) -> f64 {
        self.position
    }
}

/// Levels ε_n = π²n²/(2mℓ²), n = 1..n_max.
pub fn box_levels(bx: &BoxSpec, segment_length: f64) -> Result<SpectrumModel> {
    if !(segment_length > 0.0) {
        return domain(format!("segment length must be positive, got {segment_length}"));
    }
    let e1 = bx.ground_energy(segment_length);
    SpectrumModel::nondegenerate((1..=bx.n_max).map(|n| e1 * (n * n) as f64).collect())
}

/// (ε₁, ln Σ_n e^{−β(ε_n − ε₁)}).
fn ln_single(bx: &BoxSpec, segment: f64, beta: f64) -> (f64, f64) {
    let e1 = bx.ground_energy(segment);
    let s: f64 = (1..=bx.n_max).map(|n| (-beta * e1 * ((n * n) as f64 - 1.0)).exp()).sum();
    (e1, s.ln())
}

/// Log-domain accumulator for `a + b` with the paired logarithmic derivatives.
fn log_add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    if a.0 == f64::NEG_INFINITY {
        return b;
    }
    if b.0 == f64::NEG_INFINITY {
        return a;
    }
    let top = a.0.max(b.0);
    let (wa, wb) = ((a.0 - top).exp(), (b.0 - top).exp());
    let sum = wa + wb;
    (top + sum.ln(), (wa * a.1 + wb * b.1) / sum)
}

/// ln Z_k and d ln Z_k/dℓ for k particles in one segment.
///
/// Symmetric sums are accumulated level by level in log space, so deep ground-state
/// limits neither underflow nor lose the Pauli-suppressed terms.
fn ln_z_stat(bx: &BoxSpec, k: usize, segment: f64, beta: f64) -> (f64, f64) {
    if k == 0 {
        return (0.0, 0.0);
    }
    let e1 = bx.ground_energy(segment);
    // ln x_n = −β(ε_n − ε₁), d ln x_n/dℓ = 2β(ε_n − ε₁)/ℓ
    let level = |n: usize| {
        let gap = beta * e1 * ((n * n) as f64 - 1.0);
        (-gap, 2.0 * gap / segment)
    };
    let kf = k as f64;
    let (ln_poly, dln_poly) = match bx.statistics {
        Statistics::Boltzmann => {
            let mut z = (f64::NEG_INFINITY, 0.0);
            for n in 1..=bx.n_max {
                z = log_add(z, level(n));
            }
            let ln_fact = [0.0, 0.0, 2f64.ln(), 6f64.ln()][k];
            (kf * z.0 - ln_fact, kf * z.1)
        }
        Statistics::Boson | Statistics::Fermion => {
            let mut poly = [(0.0, 0.0), (f64::NEG_INFINITY, 0.0), (f64::NEG_INFINITY, 0.0), (f64::NEG_INFINITY, 0.0)];
            let update = |poly: &mut [(f64, f64); 4], j: usize, x: (f64, f64)| {
                let prev = poly[j - 1];
                poly[j] = log_add(poly[j], (x.0 + prev.0, x.1 + prev.1));
            };
            for n in 1..=bx.n_max {
                let x = level(n);
                if bx.statistics == Statistics::Boson {
                    // complete homogeneous sums: ascending in-place update
                    for j in 1..=k {
                        update(&mut poly, j, x);
                    }
                } else {
                    // elementary sums: descending in-place update
                    for j in (1..=k).rev() {
                        update(&mut poly, j, x);
                    }
                }
            }
            poly[k]
        }
    };
    (-kf * beta * e1 + ln_poly, 2.0 * kf * beta * e1 / segment + dln_poly)
}

fn check_sector(bx: &BoxSpec, m_left: usize) -> Result<()> {
    if m_left > bx.n_particles {
        return domain(format!("m_left = {m_left} exceeds N = {}", bx.n_particles));
    }
    Ok(())
}

/// ln Z at full length without a wall.
pub fn ln_full_partition(bx: &BoxSpec, beta: InverseTemperature) -> f64 {
    ln_z_stat(bx, bx.n_particles, bx.length, beta.value()).0
}

/// ln Z_m(l) = ln Z_m(l) + ln Z_{N−m}(L − l).
pub fn ln_sector_partition(bx: &BoxSpec, wall: WallConfig, m_left: usize, beta: InverseTemperature) -> Result<f64> {
    check_sector(bx, m_left)?;
    let b = beta.value();
    let l = wall.position;
    Ok(ln_z_stat(bx, m_left, l, b).0 + ln_z_stat(bx, bx.n_particles - m_left, bx.length - l, b).0)
}

pub fn sector_partition(bx: &BoxSpec, wall: WallConfig, m_left: usize, beta: InverseTemperature) -> Result<f64> {
    bx.check_cutoff(beta)?;
    Ok(ln_sector_partition(bx, wall, m_left, beta)?.exp())
}

/// ln Z(l) = ln Σ_m Z_m(l).
pub fn ln_total_partition(bx: &BoxSpec, wall: WallConfig, beta: InverseTemperature) -> Result<f64> {
    let terms: Vec<f64> = (0..=bx.n_particles).map(|m| ln_sector_partition(bx, wall, m, beta)).collect::<Result<_>>()?;
    Ok(log_sum_exp(&terms))
}

/// p_m = Z_m(l)/Z(l) for m = 0..N.
pub fn measurement_probs(bx: &BoxSpec, wall: WallConfig, beta: InverseTemperature) -> Result<ProbDist> {
    bx.check_cutoff(beta)?;
    let terms: Vec<f64> = (0..=bx.n_particles).map(|m| ln_sector_partition(bx, wall, m, beta)).collect::<Result<_>>()?;
    let total = log_sum_exp(&terms);
    ProbDist::normalized(terms.iter().map(|t| (t - total).exp()).collect())
}

/// Net generalised force on the wall, β⁻¹ d ln Z_m/dl, in units of β⁻¹.
pub fn wall_force(bx: &BoxSpec, position: f64, m_left: usize, beta: InverseTemperature) -> f64 {
    let b = beta.value();
    ln_z_stat(bx, m_left, position, b).1 - ln_z_stat(bx, bx.n_particles - m_left, bx.length - position, b).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "position", rename_all = "snake_case")]
pub enum WallEquilibrium {
    Interior(f64),
    /// The wall runs to an end; the occupied segment fills the box.
    Boundary(f64),
}

impl WallEquilibrium {
    pub fn position(&self) -> f64 {
        match *self {
            WallEquilibrium::Interior(x) | WallEquilibrium::Boundary(x) => x,
        }
    }
}

/// Force balance d ln Z_m/dl = 0, by bisection on (δ, L − δ).
pub fn equilibrium_wall(bx: &BoxSpec, beta: InverseTemperature, m_left: usize) -> Result<WallEquilibrium> {
    check_sector(bx, m_left)?;
    let n = bx.n_particles;
    if m_left == 0 {
        return Ok(WallEquilibrium::Boundary(0.0));
    }
    if m_left == n {
        return Ok(WallEquilibrium::Boundary(bx.length));
    }
    if 2 * m_left == n {
        return Ok(WallEquilibrium::Interior(bx.length / 2.0));
    }
    let delta = 1e-9 * bx.length;
    let root = bisect(|l| wall_force(bx, l, m_left, beta), delta, bx.length - delta, 1e-14);
    Ok(match root {
        Some(l) => WallEquilibrium::Interior(l),
        None if wall_force(bx, bx.length / 2.0, m_left, beta) > 0.0 => WallEquilibrium::Boundary(bx.length),
        None => WallEquilibrium::Boundary(0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzilardReport {
    pub w_ins: f64,
    pub w_exp: f64,
    pub w_rem: f64,
    /// W_ins + W_exp + W_rem.
    pub w_tot: f64,
    /// −β⁻¹ Σ p_m ln(p_m/p*_m).
    pub w_tot_closed: f64,
    pub p_m: ProbDist,
    pub p_star_m: Vec<f64>,
    pub l_eq: Vec<WallEquilibrium>,
    pub residual: f64,
}

/// ln Z_m and ln Z after the wall settles at `eq`.
fn settled_logs(bx: &BoxSpec, eq: WallEquilibrium, m_left: usize, beta: InverseTemperature) -> Result<(f64, f64)> {
    match eq {
        WallEquilibrium::Boundary(_) => {
            let full = ln_full_partition(bx, beta);
            Ok((full, full))
        }
        WallEquilibrium::Interior(l) => {
            let wall = WallConfig::new(l, bx)?;
            Ok((ln_sector_partition(bx, wall, m_left, beta)?, ln_total_partition(bx, wall, beta)?))
        }
    }
}

/// Insertion, measurement, expansion and removal works for one cycle.
pub fn run_cycle(bx: &BoxSpec, wall: WallConfig, beta: InverseTemperature) -> Result<SzilardReport> {
    bx.check_cutoff(beta)?;
    let t = 1.0 / beta.value();
    let n = bx.n_particles;
    let ln_full = ln_full_partition(bx, beta);
    let ln_sectors: Vec<f64> = (0..=n).map(|m| ln_sector_partition(bx, wall, m, beta)).collect::<Result<_>>()?;
    let ln_z_l = log_sum_exp(&ln_sectors);
    let probs: Vec<f64> = ln_sectors.iter().map(|s| (s - ln_z_l).exp()).collect();

    let mut w_exp = 0.0;
    let mut w_rem = 0.0;
    let mut w_closed = 0.0;
    let mut p_star = Vec::with_capacity(n + 1);
    let mut l_eq = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let eq = equilibrium_wall(bx, beta, m)?;
        let (ln_zm_eq, ln_z_eq) = settled_logs(bx, eq, m, beta)?;
        let p = probs[m];
        let ln_p_star = ln_zm_eq - ln_z_eq;
        if p > 0.0 {
            w_exp += p * (ln_zm_eq - ln_sectors[m]);
            w_rem += p * (ln_full - ln_z_eq);
            w_closed -= p * ((ln_sectors[m] - ln_z_l) - ln_p_star);
        }
        p_star.push(ln_p_star.exp());
        l_eq.push(eq);
    }
    let w_ins = t * (ln_z_l - ln_full);
    let (w_exp, w_rem, w_tot_closed) = (t * w_exp, t * w_rem, t * w_closed);
    let w_tot = w_ins + w_exp + w_rem;
    Ok(SzilardReport {
        w_ins,
        w_exp,
        w_rem,
        w_tot,
        w_tot_closed,
        p_m: ProbDist::normalized(probs)?,
        p_star_m: p_star,
        l_eq,
        residual: (w_tot - w_tot_closed).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageDecomposition {
    pub w_ins: f64,
    pub w_exp: f64,
    pub w_rem: f64,
    /// β⁻¹ ln[z(L)/z(L/2)].
    pub delta: f64,
}

/// Stage works of the single-particle cycle with the wall at L/2.
pub fn classical_stage_decomposition(bx: &BoxSpec, beta: InverseTemperature) -> Result<StageDecomposition> {
    if bx.n_particles != 1 {
        return domain("stage decomposition is defined for one particle");
    }
    let r = run_cycle(bx, WallConfig::fraction(0.5, bx)?, beta)?;
    let b = beta.value();
    let delta = (ln_z_stat(bx, 1, bx.length, b).0 - ln_z_stat(bx, 1, bx.length / 2.0, b).0) / b;
    let t = 1.0 / b;
    if r.w_rem.abs() > 1e-9 * t {
        return crate::error::invariant(format!("removal work {} should vanish", r.w_rem));
    }
    if (r.w_ins + r.w_exp - t * LN_2).abs() > 1e-9 * t {
        return crate::error::invariant("insertion plus expansion differs from β⁻¹ ln 2");
    }
    Ok(StageDecomposition { w_ins: r.w_ins, w_exp: r.w_exp, w_rem: r.w_rem, delta })
}

/// Isothermal work done on an ideal single-particle gas compressed from `v_initial`
/// to `v_final`: −β⁻¹ ln(V_f/V_i).
pub fn isothermal_work(beta: InverseTemperature, v_initial: f64, v_final: f64) -> Result<f64> {
    if !(v_initial > 0.0 && v_final > 0.0) {
        return domain("volumes must be positive");
    }
    Ok(-(v_final / v_initial).ln() / beta.value())
}

/// Work done on the gas during the classical expansion from V/2 to V.
pub fn classical_szilard_work(beta: InverseTemperature) -> f64 {
    -LN_2 / beta.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beta1() -> InverseTemperature {
        InverseTemperature::new(1.0).unwrap()
    }

    /// Direct sum over occupation lists n1 ≤ n2 ≤ n3 (bosons) or n1 < n2 < n3 (fermions).
    fn brute_force_z(bx: &BoxSpec, k: usize, segment: f64, beta: f64) -> f64 {
        let e = |n: usize| beta * bx.ground_energy(segment) * (n * n) as f64;
        let n_max = bx.n_max;
        let strict = bx.statistics == Statistics::Fermion;
        let ok = |a: usize, b: usize| if strict { a < b } else { a <= b };
        let mut z = 0.0;
        match k {
            0 => z = 1.0,
            1 => (1..=n_max).for_each(|a| z += (-e(a)).exp()),
            2 => {
                for a in 1..=n_max {
                    for b in a..=n_max {
                        if ok(a, b) {
                            z += (-(e(a) + e(b))).exp();
                        }
                    }
                }
            }
            3 => {
                for a in 1..=n_max {
                    for b in a..=n_max {
                        for c in b..=n_max {
                            if ok(a, b) && ok(b, c) {
                                z += (-(e(a) + e(b) + e(c))).exp();
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        z
    }

    /// Cycle-index formulas in terms of single-particle sums z(jβ).
    fn cycle_index_z(stats: Statistics, k: usize, zj: impl Fn(f64) -> f64) -> f64 {
        let s = match stats {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
            Statistics::Boltzmann => 0.0,
        };
        let (z1, z2, z3) = (zj(1.0), zj(2.0), zj(3.0));
        match k {
            1 => z1,
            2 => (z1 * z1 + s * z2) / 2.0,
            3 => (z1.powi(3) + 3.0 * s * z1 * z2 + 2.0 * s * s * z3) / 6.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn box_levels_scale() {
        let bx = BoxSpec::new(PI, 0.5, 1, Statistics::Boltzmann, 60).unwrap();
        let full = box_levels(&bx, PI).unwrap();
        assert_relative_eq!(full.levels()[0], 1.0, epsilon = 1e-15);
        let half = box_levels(&bx, PI / 2.0).unwrap();
        for (a, b) in full.levels().iter().zip(half.levels()) {
            assert_relative_eq!(4.0 * a, *b, max_relative = 1e-15);
        }
        let heavy = BoxSpec::new(PI, 1.0, 1, Statistics::Boltzmann, 60).unwrap();
        assert_relative_eq!(box_levels(&heavy, PI).unwrap().levels()[3] * 2.0, full.levels()[3], max_relative = 1e-15);
    }

    #[test]
    fn dp_matches_enumeration_and_cycle_index() {
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let bx = BoxSpec::new(1.0, 3.0, 3, stats, 50).unwrap();
            for (segment, beta) in [(1.0, 0.7), (0.4, 0.2), (0.8, 2.0)] {
                for k in 1..=3 {
                    let dp = ln_z_stat(&bx, k, segment, beta).0.exp();
                    let brute = brute_force_z(&bx, k, segment, beta);
                    assert_relative_eq!(dp, brute, max_relative = 1e-12);
                    let zj = |j: f64| (1..=bx.n_max).map(|n| (-j * beta * bx.ground_energy(segment) * (n * n) as f64).exp()).sum();
                    assert_relative_eq!(dp, cycle_index_z(stats, k, zj), max_relative = 1e-12);
                }
            }
        }
        let bx = BoxSpec::new(1.0, 3.0, 3, Statistics::Boltzmann, 50).unwrap();
        let z1 = ln_z_stat(&bx, 1, 0.6, 1.1).0.exp();
        assert_relative_eq!(ln_z_stat(&bx, 3, 0.6, 1.1).0.exp(), z1.powi(3) / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for stats in Statistics::ALL {
            let bx = BoxSpec::new(1.0, 2.0, 3, stats, 80).unwrap();
            for k in 1..=3 {
                let (l, h) = (0.37, 1e-6);
                let fd = (ln_z_stat(&bx, k, l + h, 1.3).0 - ln_z_stat(&bx, k, l - h, 1.3).0) / (2.0 * h);
                assert_relative_eq!(ln_z_stat(&bx, k, l, 1.3).1, fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn ground_state_limits_of_sector_partition() {
        let beta = InverseTemperature::new(1.0).unwrap();
        let (fermi, _) = BoxSpec::for_reduced_temperature(2, Statistics::Fermion, 20.0).unwrap();
        let e1 = fermi.ground_energy(1.0);
        let wall = WallConfig::fraction(0.999_999, &fermi).unwrap();
        // both fermions on the left: leading term e^{−β(ε₁+ε₂)}
        let lz = ln_sector_partition(&fermi, wall, 2, beta).unwrap();
        let l = wall.position();
        assert_relative_eq!(lz, -5.0 * e1 / (l * l), max_relative = 1e-9);
        let (bose, _) = BoxSpec::for_reduced_temperature(2, Statistics::Boson, 20.0).unwrap();
        let lz = ln_sector_partition(&bose, wall, 2, beta).unwrap();
        assert_relative_eq!(lz, -2.0 * e1 / (l * l), max_relative = 1e-9);
        // m = 0 has unit left factor
        let w = WallConfig::fraction(0.3, &bose).unwrap();
        assert_relative_eq!(ln_sector_partition(&bose, w, 0, beta).unwrap(), ln_z_stat(&bose, 2, 0.7, 1.0).0, epsilon = 1e-15);
    }

    #[test]
    fn measurement_probability_examples() {
        let (one, b) = BoxSpec::for_reduced_temperature(1, Statistics::Boltzmann, 0.3).unwrap();
        let p = measurement_probs(&one, WallConfig::fraction(0.5, &one).unwrap(), b).unwrap();
        assert_relative_eq!(p.weights()[0], 0.5, epsilon = 1e-14);
        let p = measurement_probs(&one, WallConfig::fraction(1e-4, &one).unwrap(), b).unwrap();
        assert!(p.weights()[0] > 1.0 - 1e-12);
        let (bose, b) = BoxSpec::for_reduced_temperature(2, Statistics::Boson, 1e-5).unwrap();
        let p = measurement_probs(&bose, WallConfig::fraction(0.5, &bose).unwrap(), b).unwrap();
        for (got, want) in p.weights().iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 5e-3, "{:?}", p.weights());
        }
    }

    #[test]
    fn equilibrium_wall_examples() {
        let (two, b) = BoxSpec::for_reduced_temperature(2, Statistics::Boson, 0.5).unwrap();
        assert_eq!(equilibrium_wall(&two, b, 1).unwrap(), WallEquilibrium::Interior(0.5));
        let (one, b) = BoxSpec::for_reduced_temperature(1, Statistics::Boson, 0.5).unwrap();
        assert_eq!(equilibrium_wall(&one, b, 1).unwrap(), WallEquilibrium::Boundary(1.0));
        assert_eq!(equilibrium_wall(&one, b, 0).unwrap(), WallEquilibrium::Boundary(0.0));

        // grid-scan oracle: the root maximises ln Z_1(l)
        let (three, b) = BoxSpec::for_reduced_temperature(3, Statistics::Boson, 0.5).unwrap();
        let root = equilibrium_wall(&three, b, 1).unwrap().position();
        let (mut best, mut best_l) = (f64::NEG_INFINITY, 0.0);
        for i in 1..20_000 {
            let l = i as f64 / 20_000.0;
            let v = ln_sector_partition(&three, WallConfig::new(l, &three).unwrap(), 1, b).unwrap();
            if v > best {
                best = v;
                best_l = l;
            }
        }
        assert!((root - best_l).abs() < 1e-4, "root {root} vs scan {best_l}");
        assert!(root < 0.5);
    }

    #[test]
    fn single_particle_cycle() {
        for reduced in [1e-3, 0.5, 5.0, 20.0] {
            let (bx, b) = BoxSpec::for_reduced_temperature(1, Statistics::Boltzmann, reduced).unwrap();
            let r = run_cycle(&bx, WallConfig::fraction(0.5, &bx).unwrap(), b).unwrap();
            assert_relative_eq!(r.w_tot, LN_2, max_relative = 1e-9);
            assert_eq!(r.p_star_m, vec![1.0, 1.0]);
            assert!(r.residual < 1e-9);
        }
    }

    #[test]
    fn two_particle_limits() {
        let w = |stats, reduced| {
            let (bx, b) = BoxSpec::for_reduced_temperature(2, stats, reduced).unwrap();
            run_cycle(&bx, WallConfig::fraction(0.5, &bx).unwrap(), b).unwrap().w_tot
        };
        assert!((w(Statistics::Boson, 20.0) / (2.0 / 3.0 * 3f64.ln()) - 1.0).abs() < 0.01);
        assert!(w(Statistics::Fermion, 20.0).abs() < 1e-3);
        for stats in Statistics::ALL {
            assert!((w(stats, 1e-3) / LN_2 - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn stage_decomposition_limits() {
        let (hot, b) = BoxSpec::for_reduced_temperature(1, Statistics::Boltzmann, 1e-4).unwrap();
        let s = classical_stage_decomposition(&hot, b).unwrap();
        assert!((s.delta / LN_2 - 1.0).abs() < 0.02);
        assert!(s.w_ins.abs() < 0.02 * LN_2);
        assert!((s.w_exp / LN_2 - 1.0).abs() < 0.02);
        // cold: only the ground level matters, Δ → ε₁(L/2) − ε₁(L) = 3βε₁(L)
        let (cold, b) = BoxSpec::for_reduced_temperature(1, Statistics::Boltzmann, 20.0).unwrap();
        let s = classical_stage_decomposition(&cold, b).unwrap();
        assert_relative_eq!(s.delta, 60.0, max_relative = 1e-9);
        assert_relative_eq!(s.w_exp, s.delta, max_relative = 1e-12);
        assert_relative_eq!(s.w_ins, LN_2 - 60.0, max_relative = 1e-9);
        assert!(s.w_rem.abs() < 1e-9);
    }

    #[test]
    fn cutoff_is_enforced() {
        let bx = BoxSpec::new(1.0, 1.0, 1, Statistics::Boltzmann, 50).unwrap();
        assert!(matches!(run_cycle(&bx, WallConfig::fraction(0.5, &bx).unwrap(), InverseTemperature::new(1e-4).unwrap()), Err(CoreError::Cutoff { .. })));
        assert!(BoxSpec::new(1.0, 1.0, 4, Statistics::Boson, 50).is_err());
        assert!(BoxSpec::new(1.0, 1.0, 1, Statistics::Boson, 10).is_err());
        assert!(WallConfig::new(1.0, &bx).is_err());
    }

    #[test]
    fn classical_work_examples() {
        assert_relative_eq!(classical_szilard_work(beta1()), -LN_2, epsilon = 1e-15);
        assert_relative_eq!(classical_szilard_work(InverseTemperature::new(2.0).unwrap()), -LN_2 / 2.0, epsilon = 1e-15);
        assert_relative_eq!(isothermal_work(beta1(), 0.25, 1.0).unwrap(), -(4f64.ln()), epsilon = 1e-15);
    }
}
