//! Random states, unitaries and distributions for property sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dist::{JointDist, ProbDist};
use super::state::{CMatrix, DensityMatrix};

fn ginibre(rng: &mut impl Rng, d: usize) -> CMatrix {
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) / 2f64.sqrt()
    })
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let qr = ginibre(rng, d).qr();
    let (mut q, r) = qr.unpack();
    // Fix the phase of each column so the distribution is exactly Haar.
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Full-rank random state G G† / tr(G G†) (Hilbert–Schmidt measure).
pub fn random_state(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d);
    let m = &g * g.adjoint();
    DensityMatrix::from_noisy(m, vec![d]).expect("Wishart matrix is a valid state")
}

/// Random state with an explicit bipartition.
pub fn random_bipartite_state(rng: &mut impl Rng, da: usize, db: usize) -> DensityMatrix {
    let g = ginibre(rng, da * db);
    DensityMatrix::from_noisy(&g * g.adjoint(), vec![da, db]).expect("Wishart matrix is a valid state")
}

/// Random pure state |ψ⟩⟨ψ|.
pub fn random_pure_state(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let psi: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    DensityMatrix::pure(&psi).expect("Gaussian vector is non-zero")
}

/// Flat-Dirichlet distribution on `n` outcomes.
pub fn random_distribution(rng: &mut impl Rng, n: usize) -> ProbDist {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    ProbDist::normalized(w).expect("exponential weights are positive")
}

pub fn random_joint(rng: &mut impl Rng, rows: usize, cols: usize) -> JointDist {
    let p = random_distribution(rng, rows * cols);
    JointDist::from_flat(rows, cols, p.weights().to_vec()).expect("normalised table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::state::unitarity_defect;
    use crate::rng::stream;

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = stream(1, 0);
        for d in [2, 3, 6] {
            assert!(unitarity_defect(&haar_unitary(&mut rng, d)) < 1e-13);
        }
    }

    #[test]
    fn random_states_are_valid_and_mixed() {
        let mut rng = stream(2, 0);
        let rho = random_state(&mut rng, 4);
        assert!(rho.eigenvalues()[0] > 0.0);
        let psi = random_pure_state(&mut rng, 3);
        assert!(crate::info::von_neumann_entropy(&psi) < 1e-12);
        assert_eq!(random_bipartite_state(&mut rng, 2, 3).dims(), &[2, 3]);
    }
}
