//! Polynomial least-squares approximation on the split compact
//! `K_ε = K⁺ ∪ K⁻`, with `K⁺ = {|z| <= 1, Im z >= ε}` (target `1/z`) and
//! `K⁻ = {|z| <= 1, Im z <= 0}` (target `1`).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::GermError;
use crate::coeff::Float;
use crate::par::{self, Execution};
use crate::series::Series1;

/// Condition number above which a fit is flagged as unreliable.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Which pieces of the compact enter the fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuvalTarget {
    #[default]
    Split,
    /// Only `K⁻` with target `1`.
    MinusOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuvalConfig {
    pub n: usize,
    pub eps: f64,
    pub degree: usize,
    pub samples: usize,
    pub target: DuvalTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuvalStage {
    pub n: usize,
    pub eps: f64,
    pub degree: usize,
    pub samples: usize,
    /// The fitted polynomial `P_n`.
    pub poly: Series1<Float>,
    /// `max |P_n(z) - 1/z|` over the `K⁺` samples (0 when `K⁺` is not fitted).
    pub sup_plus: f64,
    /// `max |P_n(z) - 1|` over the `K⁻` samples.
    pub sup_minus: f64,
    /// `max |P_n|` over samples of the unit circle.
    pub sup_disc: f64,
    pub condition: f64,
    pub reliable: bool,
}

impl DuvalStage {
    /// Whether the measured disc sup is within `√n`.
    pub fn within_sqrt_n(&self) -> bool {
        self.sup_disc <= (self.n as f64).sqrt()
    }
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn midpoints(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |k| (k as f64 + 0.5) / count as f64)
}

/// Splits `total` over pieces proportionally to their lengths.
fn split_counts(total: usize, lengths: &[f64]) -> Vec<usize> {
    let sum: f64 = lengths.iter().sum();
    let mut counts: Vec<usize> = lengths
        .iter()
        .map(|l| ((total as f64) * l / sum).round().max(1.0) as usize)
        .collect();
    let assigned: usize = counts.iter().sum();
    if assigned > total {
        let last = counts.len() - 1;
        counts[last] = counts[last].saturating_sub(assigned - total).max(1);
    }
    counts
}

/// Boundary samples of `K⁺`: the upper arc above `Im = ε` and the chord.
pub fn sample_k_plus(eps: f64, count: usize) -> Vec<Complex64> {
    let t0 = eps.asin();
    let half = (1.0 - eps * eps).sqrt();
    let arc = PI - 2.0 * t0;
    let counts = split_counts(count, &[arc, 2.0 * half]);
    let mut pts: Vec<Complex64> = midpoints(counts[0]).map(|u| cis(t0 + u * arc)).collect();
    pts.extend(midpoints(counts[1]).map(|u| Complex64::new(-half + 2.0 * half * u, eps)));
    pts
}

/// Boundary samples of `K⁻`: the lower arc and the segment `[-1, 1]`.
pub fn sample_k_minus(count: usize) -> Vec<Complex64> {
    let counts = split_counts(count, &[PI, 2.0]);
    let mut pts: Vec<Complex64> = midpoints(counts[0]).map(|u| cis(PI + u * PI)).collect();
    pts.extend(midpoints(counts[1]).map(|u| Complex64::new(-1.0 + 2.0 * u, 0.0)));
    pts
}

fn sample_circle(count: usize) -> Vec<Complex64> {
    midpoints(count).map(|u| cis(2.0 * PI * u)).collect()
}

fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Least-squares fit of `P_n` and its measured errors.
pub fn duval_stage(cfg: &DuvalConfig) -> Result<DuvalStage, GermError> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(GermError::InvalidParameter(format!("eps must lie in (0, 1), got {}", cfg.eps)));
    }
    if cfg.samples < 4 {
        return Err(GermError::InvalidParameter("at least 4 samples are required".into()));
    }
    if cfg.degree > crate::ORDER_CAP {
        return Err(GermError::InvalidParameter(format!(
            "degree {} exceeds the cap {}",
            cfg.degree,
            crate::ORDER_CAP
        )));
    }
    let (plus, minus) = match cfg.target {
        DuvalTarget::Split => {
            let lengths = [
                PI - 2.0 * cfg.eps.asin() + 2.0 * (1.0 - cfg.eps * cfg.eps).sqrt(),
                PI + 2.0,
            ];
            let counts = split_counts(cfg.samples, &lengths);
            (sample_k_plus(cfg.eps, counts[0]), sample_k_minus(counts[1]))
        }
        DuvalTarget::MinusOnly => (Vec::new(), sample_k_minus(cfg.samples)),
    };
    let one = Complex64::new(1.0, 0.0);
    let points: Vec<(Complex64, Complex64)> = plus
        .iter()
        .map(|&z| (z, one / z))
        .chain(minus.iter().map(|&z| (z, one)))
        .collect();

    let cols = cfg.degree + 1;
    let v = DMatrix::from_fn(points.len(), cols, |r, c| points[r].0.powu(c as u32));
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = v.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let sol = svd
        .solve(&rhs, smax * f64::EPSILON * cols as f64)
        .map_err(|e| GermError::LeastSquares(e.to_string()))?;
    let coeffs: Vec<Complex64> = sol.iter().cloned().collect();

    let sup = |pts: &[Complex64], target: &dyn Fn(Complex64) -> Complex64| {
        pts.iter()
            .map(|&z| (eval(&coeffs, z) - target(z)).norm())
            .fold(0.0, f64::max)
    };
    let sup_plus = sup(&plus, &|z| one / z);
    let sup_minus = sup(&minus, &|_| one);
    let sup_disc = sample_circle(cfg.samples)
        .iter()
        .map(|&z| eval(&coeffs, z).norm())
        .fold(0.0, f64::max);

    Ok(DuvalStage {
        n: cfg.n,
        eps: cfg.eps,
        degree: cfg.degree,
        samples: cfg.samples,
        poly: Series1::new(cfg.degree, coeffs).map_err(|e| GermError::LeastSquares(e.to_string()))?,
        sup_plus,
        sup_minus,
        sup_disc,
        condition,
        reliable: condition.is_finite() && condition <= CONDITION_LIMIT,
    })
}

/// Fits every degree in `degrees` on the same sample set.
pub fn duval_sweep(
    eps: f64,
    degrees: &[usize],
    samples: usize,
    exec: Execution,
) -> Result<Vec<DuvalStage>, GermError> {
    par::map(degrees, exec, |&degree| {
        duval_stage(&DuvalConfig {
            n: degree,
            eps,
            degree,
            samples,
            target: DuvalTarget::Split,
        })
    })
    .into_iter()
    .collect()
}
