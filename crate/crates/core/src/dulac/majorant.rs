//! Majorant series for the separatrix and the resulting radius estimate.

use super::separatrix::{run_recurrence, separatrix_recurrence, BSign};
use super::DulacError;
use crate::coeff::{Coeff, Float};
use crate::equation::DiagonalizedEquation;
use crate::series::{Series1, Series2};

/// `s̄_0..s̄_n` from the recurrence with every coefficient replaced by
/// `M·σ^{i+j}`, except `a_00, a_10, a_01, b_00` (zero) and `b_01 = 1`.
pub fn majorant_sequence(m: f64, sigma: f64, n: usize) -> Series1<Float> {
    let c = |i: usize, j: usize| Float::new(m * sigma.powi((i + j) as i32), 0.0);
    let mut a_terms = Vec::new();
    let mut b_terms = vec![(1, 0, c(1, 0))];
    for d in 2..=n {
        for j in 0..=d {
            a_terms.push((d - j, j, c(d - j, j)));
            b_terms.push((d - j, j, c(d - j, j)));
        }
    }
    let st = run_recurrence(&a_terms, &b_terms, n, BSign::Plus);
    Series1::new(n, st.s).expect("order within cap")
}

/// `(max_{n/2 <= p <= n} s̄_p^{1/p})⁻¹`, or `None` when the sequence
/// vanishes there.
pub fn radius_estimate(majorant: &Series1<Float>) -> Option<f64> {
    let n = majorant.order();
    let root = (n / 2).max(2)..=n;
    let worst = root
        .map(|p| majorant.coeff(p).re.max(0.0).powf(1.0 / p as f64))
        .fold(0.0, f64::max);
    (worst > 0.0).then(|| 1.0 / worst)
}

/// Finite-order radius estimate with its supporting checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBound {
    pub m: f64,
    pub sigma: f64,
    pub order: usize,
    /// `None` when the majorant vanishes (no finite estimate).
    pub estimate: Option<f64>,
    pub majorant: Series1<Float>,
    /// `|a_ij|, |b_ij| <= M·σ^{i+j}` on every stored coefficient.
    pub hypothesis_holds: bool,
    /// `|s_p| <= s̄_p` for every `p <= order`.
    pub dominated: bool,
}

const SLACK: f64 = 1e-12;

fn dominating_pair<C: Coeff>(deq: &DiagonalizedEquation<C>) -> f64 {
    let a = deq.a.terms().filter(|(k, _)| k.degree() >= 2);
    let b = deq
        .b
        .terms()
        .filter(|(k, _)| !(k.i == 0 && k.j <= 1));
    a.chain(b).map(|(_, c)| c.modulus()).fold(0.0, f64::max)
}

fn within(s: &Series2<impl Coeff>, m: f64, sigma: f64, skip: impl Fn(usize, usize) -> bool) -> bool {
    s.terms()
        .filter(|(k, _)| !skip(k.i, k.j))
        .all(|(k, c)| c.modulus() <= m * sigma.powi(k.degree() as i32) * (1.0 + SLACK))
}

/// Radius estimate for the separatrix of `deq` at order `n`.
///
/// Without an explicit `(M, σ)` the equation must be a polynomial; then
/// `σ = 1` and `M` is the largest coefficient modulus.
pub fn radius_lower_bound<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    n: usize,
    bound: Option<(f64, f64)>,
    tol: f64,
) -> Result<RadiusBound, DulacError> {
    let (m, sigma) = match bound {
        Some(pair) => pair,
        None if deq.polynomial => (dominating_pair(deq), 1.0),
        None => return Err(DulacError::RequiresBound),
    };
    if !(m >= 0.0 && sigma > 0.0 && m.is_finite() && sigma.is_finite()) {
        return Err(DulacError::InvalidBound { m, sigma });
    }
    let deq = deq.at_order(n)?;
    let hypothesis_holds = within(&deq.a, m, sigma, |i, j| i + j < 2)
        && within(&deq.b, m, sigma, |i, j| i == 0 && j <= 1);
    let s = separatrix_recurrence(&deq, n, tol)?.s;
    let majorant = majorant_sequence(m, sigma, n);
    let dominated = (0..=n).all(|p| s.coeff(p).modulus() <= majorant.coeff(p).re * (1.0 + SLACK));
    Ok(RadiusBound {
        m,
        sigma,
        order: n,
        estimate: radius_estimate(&majorant),
        majorant,
        hypothesis_holds,
        dominated,
    })
}
