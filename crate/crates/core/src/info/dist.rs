//! Classical distributions and Shannon-type entropies.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invariant, Result};
use crate::numeric::{pairwise_sum, xlogx};

pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A normalised probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbDist {
    weights: Vec<f64>,
}

impl ProbDist {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return domain("empty probability vector");
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return invariant(format!("negative or non-finite probability {w}"));
        }
        let total = pairwise_sum(&weights);
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return invariant(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Self { weights })
    }

    /// Normalise arbitrary non-negative weights.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let total = pairwise_sum(&weights);
        if !(total > 0.0) || !total.is_finite() {
            return domain("weights must have a positive finite sum");
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(weights)
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ProbDist {
    type Error = crate::CoreError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbDist> for Vec<f64> {
    fn from(p: ProbDist) -> Self {
        p.weights
    }
}

/// Joint distribution `p(x, y)` stored row-major with `x` indexing rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDist {
    rows: usize,
    cols: usize,
    table: Vec<f64>,
}

impl JointDist {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return domain("empty joint table");
        }
        if table.iter().any(|r| r.len() != cols) {
            return domain("ragged joint table");
        }
        let flat: Vec<f64> = table.into_iter().flatten().collect();
        Self::from_flat(rows, cols, flat)
    }

    pub fn from_flat(rows: usize, cols: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != rows * cols {
            return domain("table length does not match shape");
        }
        if let Some(w) = table.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return invariant(format!("negative or non-finite joint probability {w}"));
        }
        let total = pairwise_sum(&table);
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return invariant(format!("joint probabilities sum to {total}, not 1"));
        }
        Ok(Self { rows, cols, table })
    }

    /// `p(x) p(y)`.
    pub fn product(px: &ProbDist, py: &ProbDist) -> Self {
        let table = px
            .weights()
            .iter()
            .flat_map(|a| py.weights().iter().map(move |b| a * b))
            .collect();
        Self { rows: px.len(), cols: py.len(), table }
    }

    /// Joint from a prior `p(x)` and a channel `p(y|x)` given as `channel[x][y]`.
    pub fn from_channel(px: &ProbDist, channel: &[Vec<f64>]) -> Result<Self> {
        if channel.len() != px.len() {
            return domain("channel rows must match prior length");
        }
        let table: Vec<Vec<f64>> = px
            .weights()
            .iter()
            .zip(channel)
            .map(|(p, row)| row.iter().map(|c| p * c).collect())
            .collect();
        Self::new(table)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.table[x * self.cols + y]
    }

    pub fn transpose(&self) -> Self {
        let mut table = vec![0.0; self.table.len()];
        for x in 0..self.rows {
            for y in 0..self.cols {
                table[y * self.rows + x] = self.get(x, y);
            }
        }
        Self { rows: self.cols, cols: self.rows, table }
    }

    pub fn marginal_x(&self) -> ProbDist {
        let w = (0..self.rows).map(|x| (0..self.cols).map(|y| self.get(x, y)).sum()).collect();
        ProbDist { weights: w }
    }

    pub fn marginal_y(&self) -> ProbDist {
        let w = (0..self.cols).map(|y| (0..self.rows).map(|x| self.get(x, y)).sum()).collect();
        ProbDist { weights: w }
    }

    /// Entropy of the joint table, S(X, Y).
    pub fn joint_entropy(&self) -> f64 {
        -self.table.iter().map(|p| xlogx(*p)).sum::<f64>()
    }
}

/// −ln p, the surprisal of an event of probability `p`.
pub fn information_content(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("probability {p} outside (0, 1]"));
    }
    Ok(-p.ln())
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

pub fn bits_to_nats(bits: f64) -> f64 {
    bits * std::f64::consts::LN_2
}

pub fn shannon_entropy(p: &ProbDist) -> f64 {
    entropy_of_weights(p.weights())
}

pub(crate) fn entropy_of_weights(w: &[f64]) -> f64 {
    let terms: Vec<f64> = w.iter().map(|p| -xlogx(*p)).collect();
    pairwise_sum(&terms).max(0.0)
}

/// Binary entropy H(p) in nats.
pub fn binary_entropy(p: f64) -> f64 {
    -(xlogx(p) + xlogx(1.0 - p))
}

/// S(X|Y) = −Σ p(x,y) ln p(x|y).
pub fn conditional_entropy(p: &JointDist) -> f64 {
    let py = p.marginal_y();
    let mut s = 0.0;
    for x in 0..p.rows {
        for y in 0..p.cols {
            let pxy = p.get(x, y);
            if pxy > 0.0 {
                s -= pxy * (pxy / py.weights[y]).ln();
            }
        }
    }
    s.max(0.0)
}

/// I(X:Y) = Σ p(x,y) ln[p(x,y) / (p(x) p(y))].
pub fn mutual_information_classical(p: &JointDist) -> f64 {
    let px = p.marginal_x();
    let py = p.marginal_y();
    let mut s = 0.0;
    for x in 0..p.rows {
        for y in 0..p.cols {
            let pxy = p.get(x, y);
            if pxy > 0.0 {
                s += pxy * (pxy / (px.weights[x] * py.weights[y])).ln();
            }
        }
    }
    s.max(0.0)
}

/// The three entropy-difference expressions of mutual information:
/// S(X) − S(X|Y), S(Y) − S(Y|X), S(X) + S(Y) − S(X,Y).
pub fn mutual_information_forms(p: &JointDist) -> [f64; 3] {
    let sx = shannon_entropy(&p.marginal_x());
    let sy = shannon_entropy(&p.marginal_y());
    [
        sx - conditional_entropy(p),
        sy - conditional_entropy(&p.transpose()),
        sx + sy - p.joint_entropy(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn bsc(eps: f64) -> JointDist {
        JointDist::new(vec![
            vec![0.5 * (1.0 - eps), 0.5 * eps],
            vec![0.5 * eps, 0.5 * (1.0 - eps)],
        ])
        .unwrap()
    }

    #[test]
    fn information_content_examples() {
        assert_eq!(information_content(1.0).unwrap(), 0.0);
        assert_relative_eq!(information_content(0.5).unwrap(), LN_2, epsilon = 1e-15);
        assert_relative_eq!(information_content(0.1).unwrap(), 2.302_585_092_994_046, epsilon = 1e-14);
        assert!(information_content(0.0).is_err());
        assert!(information_content(1.5).is_err());
        assert_relative_eq!(nats_to_bits(LN_2), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&ProbDist::new(vec![1.0, 0.0]).unwrap()), 0.0);
        assert_relative_eq!(shannon_entropy(&ProbDist::uniform(2)), LN_2, epsilon = 1e-15);
        // -(0.25 ln 0.25 + 0.75 ln 0.75)
        let s = shannon_entropy(&ProbDist::new(vec![0.25, 0.75]).unwrap());
        assert_relative_eq!(s, 0.562_335_144_618_808_0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_invalid_distributions() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbDist::new(vec![]).is_err());
        assert!(JointDist::new(vec![vec![0.5], vec![0.5, 0.0]]).is_err());
        assert!(serde_json::from_str::<ProbDist>("[0.3, 0.3]").is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let indep = JointDist::product(&ProbDist::new(vec![0.3, 0.7]).unwrap(), &ProbDist::uniform(3));
        assert!(mutual_information_classical(&indep).abs() < 1e-15);
        assert_relative_eq!(mutual_information_classical(&bsc(0.0)), LN_2, epsilon = 1e-15);
        // ln 2 − H(0.1)
        assert_relative_eq!(
            mutual_information_classical(&bsc(0.1)),
            0.368_064_207_168_497_07,
            epsilon = 1e-12
        );
    }

    #[test]
    fn conditional_entropy_examples() {
        assert!(conditional_entropy(&bsc(0.0)).abs() < 1e-15);
        let px = ProbDist::new(vec![0.2, 0.8]).unwrap();
        let indep = JointDist::product(&px, &ProbDist::uniform(2));
        assert_relative_eq!(conditional_entropy(&indep), shannon_entropy(&px), epsilon = 1e-14);
        assert_relative_eq!(conditional_entropy(&bsc(0.1)), 0.325_082_973_391_448_2, epsilon = 1e-12);
        assert_relative_eq!(binary_entropy(0.1), 0.325_082_973_391_448_2, epsilon = 1e-14);
    }

    #[test]
    fn forms_agree_on_asymmetric_table() {
        let p = JointDist::new(vec![vec![0.1, 0.2, 0.05], vec![0.3, 0.05, 0.3]]).unwrap();
        let direct = mutual_information_classical(&p);
        for f in mutual_information_forms(&p) {
            assert_relative_eq!(f, direct, epsilon = 1e-12);
        }
        assert_relative_eq!(direct, mutual_information_classical(&p.transpose()), epsilon = 1e-15);
    }
}
