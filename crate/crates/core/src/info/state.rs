//! Finite-dimensional quantum states and the von Neumann entropy calculus.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dist::entropy_of_weights;
use crate::error::{domain, invariant, CoreError, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as exact zeros before `x ln x`.
pub const EIGEN_CLAMP: f64 = 1e-14;

/// Largest entry-wise deviation of `m` from its adjoint.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry-wise deviation of `U†U` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn check_unitary(u: &CMatrix) -> Result<()> {
    let deviation = unitarity_defect(u);
    if deviation > UNITARY_TOL {
        return Err(CoreError::NotUnitary { deviation });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix with ascending real eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Real part of tr(a·b), computed without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s.re
}

/// A positive semidefinite, unit-trace Hermitian matrix.
///
/// `dims` records the tensor-factor structure (a single entry for a simple system);
/// operations that need a bipartition take it explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let d = entries.nrows();
        Self::with_dims(entries, vec![d])
    }

    pub fn with_dims(entries: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let d = entries.nrows();
        if d == 0 || entries.ncols() != d {
            return Err(CoreError::Shape {
                expected: "non-empty square matrix".into(),
                found: format!("{}x{}", entries.nrows(), entries.ncols()),
            });
        }
        if dims.iter().product::<usize>() != d {
            return Err(CoreError::Shape {
                expected: format!("subsystem dims with product {d}"),
                found: format!("{dims:?}"),
            });
        }
        let herm = hermiticity_defect(&entries);
        if herm > HERMITIAN_TOL {
            return invariant(format!("matrix not Hermitian (defect {herm:.3e})"));
        }
        let tr: f64 = (0..d).map(|i| entries[(i, i)].re).sum();
        if (tr - 1.0).abs() > TRACE_TOL {
            return invariant(format!("trace {tr} differs from 1"));
        }
        let (values, _) = hermitian_eigen(&entries);
        if values[0] < -POSITIVITY_TOL {
            return invariant(format!("negative eigenvalue {}", values[0]));
        }
        Ok(Self { entries, dims })
    }

    /// Hermitise and renormalise `m` before validation; absorbs rounding noise from
    /// products of valid operators.
    pub fn from_noisy(m: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let mut h = (&m + m.adjoint()).scale(0.5);
        let tr: f64 = (0..h.nrows()).map(|i| h[(i, i)].re).sum();
        if tr.abs() < 1e-300 {
            return invariant("zero trace");
        }
        h.scale_mut(1.0 / tr);
        Self::with_dims(h, dims)
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(probs[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalised) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return domain("zero state vector");
        }
        let d = psi.len();
        let m = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::new(m)
    }

    /// Computational basis state |k⟩⟨k| in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return domain(format!("basis index {k} out of range for dimension {d}"));
        }
        let mut p = vec![0.0; d];
        p[k] = 1.0;
        Self::diagonal(&p)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::diagonal(&vec![1.0 / d as f64; d]).expect("uniform state is valid")
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    /// Ascending eigenvalues with tiny values clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = hermitian_eigen(&self.entries);
        vals.into_iter().map(|v| if v < EIGEN_CLAMP { 0.0 } else { v }).collect()
    }

    /// Real part of tr(ρ·op).
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        trace_product(&self.entries, op)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { entries: kron(&self.entries, &other.entries), dims }
    }

    /// U ρ U†.
    pub fn evolve(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(CoreError::Shape {
                expected: format!("{0}x{0} unitary", self.dim()),
                found: format!("{}x{}", u.nrows(), u.ncols()),
            });
        }
        check_unitary(u)?;
        let out = u * &self.entries * u.adjoint();
        Self::from_noisy(out, self.dims.clone())
    }

    /// Reduced state on the subsystems listed in `keep` (ascending order), for a
    /// composite with factor dimensions `dims`.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(CoreError::Shape {
                expected: format!("dims with product {}", self.dim()),
                found: format!("{dims:?}"),
            });
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return domain(format!("keep list {keep:?} must be ascending indices below {}", dims.len()));
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let d_keep: usize = kept_dims.iter().product();
        let d_trace = total / d_keep;

        // Split every full index into (kept index, traced index).
        let mut split = Vec::with_capacity(total);
        for n in 0..total {
            let mut rem = n;
            let mut digits = vec![0usize; dims.len()];
            for (slot, &d) in dims.iter().enumerate().rev() {
                digits[slot] = rem % d;
                rem /= d;
            }
            let (mut ki, mut ti) = (0usize, 0usize);
            for (slot, &d) in dims.iter().enumerate() {
                if keep.contains(&slot) {
                    ki = ki * d + digits[slot];
                } else {
                    ti = ti * d + digits[slot];
                }
            }
            split.push((ki, ti));
        }
        let mut by_trace: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d_trace];
        for (n, &(ki, ti)) in split.iter().enumerate() {
            by_trace[ti].push((ki, n));
        }
        let mut out = CMatrix::zeros(d_keep, d_keep);
        for group in &by_trace {
            for &(ka, na) in group {
                for &(kb, nb) in group {
                    out[(ka, kb)] += self.entries[(na, nb)];
                }
            }
        }
        let dims_out = if kept_dims.is_empty() { vec![1] } else { kept_dims };
        Self::from_noisy(out, dims_out)
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.entries - &other.entries;
        let (vals, _) = hermitian_eigen(&diff);
        0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
    }
}

/// −Σ λ ln λ over the spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_weights(&rho.eigenvalues())
}

/// Relative entropy S(σ‖ρ) = −S(σ) − tr(σ ln ρ); +∞ when supp σ ⊄ supp ρ.
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if sigma.dim() != rho.dim() {
        return Err(CoreError::Shape {
            expected: format!("dimension {}", rho.dim()),
            found: format!("dimension {}", sigma.dim()),
        });
    }
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut cross = 0.0;
    for (i, &lambda) in vals.iter().enumerate() {
        let v = vecs.column(i);
        let weight = (v.adjoint() * sigma.matrix() * v)[(0, 0)].re;
        if lambda < EIGEN_CLAMP {
            if weight > 1e-12 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * lambda.ln();
    }
    Ok((-von_neumann_entropy(sigma) - cross).max(0.0))
}

/// S(ρ_A) + S(ρ_B) − S(ρ_AB).
pub fn mutual_information_quantum(rho_ab: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let d = [dims.0, dims.1];
    let a = rho_ab.partial_trace(&d, &[0])?;
    let b = rho_ab.partial_trace(&d, &[1])?;
    Ok(von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho_ab))
}

/// A complete set of mutually orthogonal projectors.
#[derive(Debug, Clone)]
pub struct CoarseGraining {
    projectors: Vec<CMatrix>,
}

impl CoarseGraining {
    pub const TOL: f64 = 1e-10;

    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return domain("empty coarse-graining");
        };
        let d = first.nrows();
        let max_abs = |m: &CMatrix| m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut sum = CMatrix::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.nrows() != d || p.ncols() != d {
                return Err(CoreError::Shape { expected: format!("{d}x{d}"), found: format!("{}x{}", p.nrows(), p.ncols()) });
            }
            if hermiticity_defect(p) > Self::TOL || max_abs(&(p * p - p)) > Self::TOL {
                return invariant(format!("element {i} is not an orthogonal projector"));
            }
            for q in &projectors[i + 1..] {
                if max_abs(&(p * q)) > Self::TOL {
                    return invariant("projectors are not mutually orthogonal");
                }
            }
            sum += p;
        }
        if max_abs(&(sum - CMatrix::identity(d, d))) > Self::TOL {
            return invariant("projectors do not sum to the identity");
        }
        Ok(Self { projectors })
    }

    /// Rank-one projectors onto the computational basis.
    pub fn computational(d: usize) -> Self {
        let projectors = (0..d)
            .map(|k| {
                let mut m = CMatrix::zeros(d, d);
                m[(k, k)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { projectors }
    }

    pub fn trivial(d: usize) -> Self {
        Self { projectors: vec![CMatrix::identity(d, d)] }
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }
}

/// Σ p_x(−ln p_x + ln V_x) with p_x = tr(P_x ρ) and V_x = tr P_x.
pub fn observational_entropy(rho: &DensityMatrix, cg: &CoarseGraining) -> Result<f64> {
    let mut s = 0.0;
    for p in cg.projectors() {
        if p.nrows() != rho.dim() {
            return Err(CoreError::Shape { expected: format!("dimension {}", rho.dim()), found: format!("dimension {}", p.nrows()) });
        }
        let px = rho.expectation(p);
        let volume: f64 = (0..p.nrows()).map(|i| p[(i, i)].re).sum();
        if px > EIGEN_CLAMP {
            s += px * (volume.ln() - px.ln());
        }
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    dims: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let entries = (0..d * d)
            .map(|k| {
                let c = self.entries[(k / d, k % d)];
                [c.re, c.im]
            })
            .collect();
        StateRecord { dims: self.dims.clone(), entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rec = StateRecord::deserialize(de)?;
        let d: usize = rec.dims.iter().product();
        if rec.entries.len() != d * d {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries for dims {:?}, found {}",
                d * d,
                rec.dims,
                rec.entries.len()
            )));
        }
        let m = CMatrix::from_fn(d, d, |i, j| {
            let [re, im] = rec.entries[i * d + j];
            Complex64::new(re, im)
        });
        DensityMatrix::with_dims(m, rec.dims).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> DensityMatrix {
        let s = 1.0 / 2f64.sqrt();
        DensityMatrix::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    fn cnot() -> CMatrix {
        let mut u = CMatrix::zeros(4, 4);
        u[(0, 0)] = c(1.0);
        u[(1, 1)] = c(1.0);
        u[(2, 3)] = c(1.0);
        u[(3, 2)] = c(1.0);
        u
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&DensityMatrix::basis(2, 0).unwrap()), 0.0);
        for d in [2usize, 3, 7] {
            assert_relative_eq!(von_neumann_entropy(&DensityMatrix::maximally_mixed(d)), (d as f64).ln(), epsilon = 1e-13);
        }
        // eigenvalues (0.25, 0.75) in a rotated basis
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5), Complex64::new(0.0, 0.25), Complex64::new(0.0, -0.25), c(0.5)]);
        let rho = DensityMatrix::new(m).unwrap();
        assert_relative_eq!(von_neumann_entropy(&rho), 0.562_335_144_618_808_4, epsilon = 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(DensityMatrix::new(m), Err(CoreError::Invariant(_))));
        let neg = CMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let one = DensityMatrix::basis(2, 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(relative_entropy(&mixed, &mixed).unwrap().abs() < 1e-14);
        assert_relative_eq!(relative_entropy(&zero, &mixed).unwrap(), LN_2, epsilon = 1e-14);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert_eq!(relative_entropy(&mixed, &one).unwrap(), f64::INFINITY);
    }

    #[test]
    fn mutual_information_examples() {
        let prod = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap().tensor(&DensityMatrix::maximally_mixed(2));
        assert!(mutual_information_quantum(&prod, (2, 2)).unwrap().abs() < 1e-13);
        assert_relative_eq!(mutual_information_quantum(&bell(), (2, 2)).unwrap(), 2.0 * LN_2, epsilon = 1e-12);
        assert!(mutual_information_quantum(&bell(), (2, 3)).is_err());
    }

    #[test]
    fn cnot_records_position_in_memory() {
        // ½(|L⟩⟨L| + |R⟩⟨R|) ⊗ |0⟩⟨0|  →  ½(|L,0⟩⟨L,0| + |R,1⟩⟨R,1|)
        let input = DensityMatrix::maximally_mixed(2).tensor(&DensityMatrix::basis(2, 0).unwrap());
        let out = input.evolve(&cnot()).unwrap();
        let expected = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(out.trace_distance(&expected) < 1e-14);
        assert_relative_eq!(mutual_information_quantum(&out, (2, 2)).unwrap(), LN_2, epsilon = 1e-13);
        let memory = out.partial_trace(&[2, 2], &[1]).unwrap();
        assert!(memory.trace_distance(&DensityMatrix::maximally_mixed(2)) < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let a = bell().partial_trace(&[2, 2], &[0]).unwrap();
        assert!(a.trace_distance(&DensityMatrix::maximally_mixed(2)) < 1e-14);
        let x = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let y = DensityMatrix::diagonal(&[0.1, 0.3, 0.6]).unwrap();
        let z = DensityMatrix::maximally_mixed(2);
        let xyz = x.tensor(&y).tensor(&z);
        assert!(xyz.partial_trace(&[2, 3, 2], &[1]).unwrap().trace_distance(&y) < 1e-14);
        assert!(xyz.partial_trace(&[2, 3, 2], &[0, 2]).unwrap().trace_distance(&x.tensor(&z)) < 1e-14);
        assert!(xyz.partial_trace(&[2, 3, 2], &[2, 0]).is_err());
    }

    #[test]
    fn evolve_checks_unitarity() {
        let rho = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let same = rho.evolve(&CMatrix::identity(2, 2)).unwrap();
        assert!(same.trace_distance(&rho) < 1e-15);
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(rho.evolve(&bad), Err(CoreError::NotUnitary { .. })));
    }

    #[test]
    fn observational_entropy_examples() {
        let diag = DensityMatrix::diagonal(&[0.1, 0.2, 0.7]).unwrap();
        let cg = CoarseGraining::computational(3);
        let shannon = -(0.1f64 * 0.1f64.ln() + 0.2 * 0.2f64.ln() + 0.7 * 0.7f64.ln());
        assert_relative_eq!(observational_entropy(&diag, &cg).unwrap(), shannon, epsilon = 1e-13);
        assert_relative_eq!(
            observational_entropy(&diag, &CoarseGraining::trivial(3)).unwrap(),
            3f64.ln(),
            epsilon = 1e-13
        );
        let s = 1.0 / 2f64.sqrt();
        let plus = DensityMatrix::pure(&[c(s), c(s)]).unwrap();
        assert_relative_eq!(observational_entropy(&plus, &CoarseGraining::computational(2)).unwrap(), LN_2, epsilon = 1e-13);
    }

    #[test]
    fn coarse_graining_must_be_complete() {
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 0)] = c(1.0);
        assert!(CoarseGraining::new(vec![p.clone()]).is_err());
        let mut q = CMatrix::zeros(2, 2);
        q[(1, 1)] = c(1.0);
        assert!(CoarseGraining::new(vec![p, q]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let rho = bell();
        let json = serde_json::to_string(&rho).unwrap();
        assert!(json.starts_with("{\"dims\":[4],\"entries\":[["));
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert!(back.trace_distance(&rho) < 1e-15);
        assert!(serde_json::from_str::<DensityMatrix>(r#"{"dims":[2],"entries":[[1,0]]}"#).is_err());
    }
}
