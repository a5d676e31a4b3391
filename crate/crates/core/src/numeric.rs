//! Small numerical helpers shared by the physics modules: order-stable summation,
//! ensemble statistics, quadrature, root bracketing and table formatting.

use serde::{Deserialize, Serialize};

/// Pairwise (cascade) summation. The result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let m = mean(xs);
        if n < 2 {
            return Self { mean: m, se: f64::NAN, n };
        }
        let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
        let var = pairwise_sum(&dev) / (n as f64 - 1.0);
        Self { mean: m, se: (var / n as f64).sqrt(), n }
    }

    /// True when `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se
    }
}

/// Delete-one jackknife for a smooth function of a sample mean.
///
/// Returns `(estimate, standard_error)`.
pub fn jackknife_of_mean(xs: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = xs.len();
    let total = pairwise_sum(xs);
    let est = f(total / n as f64);
    if n < 2 {
        return (est, f64::NAN);
    }
    let leave: Vec<f64> = xs.iter().map(|x| f((total - x) / (n as f64 - 1.0))).collect();
    let lm = mean(&leave);
    let dev: Vec<f64> = leave.iter().map(|v| (v - lm) * (v - lm)).collect();
    let var = (n as f64 - 1.0) / n as f64 * pairwise_sum(&dev);
    (est, var.sqrt())
}

/// Batch-means standard error for a correlated series.
pub fn batch_means(xs: &[f64], batches: usize) -> Estimate {
    let batches = batches.max(2).min(xs.len().max(2));
    let size = xs.len() / batches;
    if size == 0 {
        return Estimate::from_samples(xs);
    }
    let means: Vec<f64> = (0..batches).map(|b| mean(&xs[b * size..(b + 1) * size])).collect();
    let e = Estimate::from_samples(&means);
    Estimate { mean: mean(xs), se: e.se, n: xs.len() }
}

/// Ordinary least squares fit of `y = a + b·x`. Returns `(a, b)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let mx = sx / n;
    let my = sy / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// ln Σ exp(xᵢ), stable against overflow. Returns −∞ for an empty or all −∞ input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `x ln x` with the convention `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

// 10-point Gauss–Legendre nodes on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

/// Adaptive Gauss–Legendre quadrature. Endpoints are never evaluated, so integrable
/// endpoint singularities are tolerated.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = gauss_legendre(f, a, m);
        let right = gauss_legendre(f, m, b);
        let both = left + right;
        if depth == 0 || !both.is_finite() || (both - whole).abs() <= tol * both.abs().max(1e-300) {
            return both;
        }
        rec(f, a, m, left, tol, depth - 1) + rec(f, m, b, right, tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gauss_legendre(&f, a, b);
    rec(&f, a, b, whole, rel_tol, 30)
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Returns `None` when `f(lo)` and `f(hi)` share a sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Float formatting for emitted tables: 17 significant digits, '.' decimal separator.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn integrate_polynomial_and_singular() {
        assert_relative_eq!(integrate(|x| x * x * x, 0.0, 2.0, 1e-13), 4.0, max_relative = 1e-12);
        // ∫₀¹ x^{-1/2} dx = 2
        assert_relative_eq!(integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-12), 2.0, max_relative = 1e-6);
    }

    #[test]
    fn bisect_finds_cube_root() {
        let r = bisect(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert_relative_eq!(r, 2f64.cbrt(), max_relative = 1e-13);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_none());
    }

    #[test]
    fn fit_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 + 3.0 * i as f64)).collect();
        let (a, b) = linear_fit(&pts);
        assert_relative_eq!(a, 2.0, epsilon = 1e-12);
        assert_relative_eq!(b, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn jackknife_of_identity_is_standard_error() {
        let xs = [1.0, 2.0, 4.0, 7.0, 11.0];
        let (m, se) = jackknife_of_mean(&xs, |m| m);
        let e = Estimate::from_samples(&xs);
        assert_relative_eq!(m, e.mean, epsilon = 1e-12);
        assert_relative_eq!(se, e.se, epsilon = 1e-12);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 6.02e23, 1e-300] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert!(!s.contains(','));
        }
    }
}
