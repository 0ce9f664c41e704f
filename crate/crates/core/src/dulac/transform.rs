//! Fibered coordinate changes `(x, y) ↦ (φ(x, y), y)` and the straightening
//! of the separatrix.

use super::DulacError;
use crate::coeff::Coeff;
use crate::equation::DiagonalizedEquation;
use crate::series::{Series1, Series2, Var};

/// A fibered change of the first coordinate, recorded by its forward map.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberedChange<C: Coeff> {
    /// New `x` is `x - s(y)`; the inverse is `x + s(y)`.
    Shear { s: Series1<C> },
    /// New `x` is `x·m(y)` with `m(0) ≠ 0`; the inverse is `x / m(y)`.
    Scale { m: Series1<C> },
}

impl<C: Coeff> FiberedChange<C> {
    /// `φ(x, y)` as a bivariate series.
    pub fn forward(&self, order: usize) -> Series2<C> {
        let x = Series2::var(Var::X, order);
        match self {
            FiberedChange::Shear { s } => &x - &Series2::from_series1(s, Var::Y),
            FiberedChange::Scale { m } => Series2::from_series1(m, Var::Y).mul_var(Var::X),
        }
    }

    /// `φ⁻¹(x, y)` in closed form.
    pub fn inverse(&self, order: usize, tol: f64) -> Result<Series2<C>, DulacError> {
        let x = Series2::var(Var::X, order);
        Ok(match self {
            FiberedChange::Shear { s } => &x + &Series2::from_series1(s, Var::Y),
            FiberedChange::Scale { m } => {
                Series2::from_series1(&m.inverse(tol)?, Var::Y).mul_var(Var::X)
            }
        })
    }

    /// `∂φ/∂x` and `∂φ/∂y`.
    fn partials(&self, order: usize) -> Result<(Series2<C>, Series2<C>), DulacError> {
        Ok(match self {
            FiberedChange::Shear { s } => (
                Series2::one(order),
                -&Series2::from_series1(&s.derive()?, Var::Y),
            ),
            FiberedChange::Scale { m } => (
                Series2::from_series1(m, Var::Y),
                Series2::from_series1(&m.derive()?, Var::Y).mul_var(Var::X),
            ),
        })
    }

    fn check_invertible(&self, tol: f64) -> Result<(), DulacError> {
        match self {
            FiberedChange::Shear { s } => {
                if !s.coeff(0).is_negligible(tol) {
                    return Err(DulacError::NotInvertible("shear moves the origin".into()));
                }
            }
            FiberedChange::Scale { m } => {
                if m.coeff(0).is_negligible(tol) {
                    return Err(DulacError::NotInvertible("scale factor vanishes at 0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Pushes `X = A∂x + B∂y` forward through a fibered change:
/// `A' = (φ_x·A + φ_y·B)∘φ⁻¹`, `B' = B∘φ⁻¹`.
pub fn pushforward<C: Coeff>(
    a: &Series2<C>,
    b: &Series2<C>,
    change: &FiberedChange<C>,
    tol: f64,
) -> Result<(Series2<C>, Series2<C>), DulacError> {
    change.check_invertible(tol)?;
    let order = a.order().min(b.order());
    let (px, py) = change.partials(order)?;
    let inner = &px.mul_tracked(a) + &py.mul_tracked(b);
    let inv = change.inverse(order, tol)?;
    let a_new = inner.substitute(Var::X, &inv, tol)?;
    let b_new = b.substitute(Var::X, &inv, tol)?;
    Ok((a_new, b_new))
}

/// `(A1, B1)`: the field after moving the separatrix to `{x = 0}`.
pub fn shear<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    s: &Series1<C>,
    tol: f64,
) -> Result<(Series2<C>, Series2<C>), DulacError> {
    let n = s.order().min(deq.order());
    let a = deq.a.jet(n)?;
    let b = deq.b.jet(n)?;
    pushforward(&a, &b, &FiberedChange::Shear { s: s.jet(n)? }, tol)
}

/// Field with the separatrix on `{x = 0}` and the factorization
/// `A1 = x·(a0(y) + alpha·x·A2(x, y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightenedPair<C: Coeff> {
    pub a1: Series2<C>,
    pub b1: Series2<C>,
    pub a0: Series1<C>,
    pub alpha: C,
    pub a2: Series2<C>,
}

pub fn straighten<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    s: &Series1<C>,
    tol: f64,
) -> Result<StraightenedPair<C>, DulacError> {
    let (a1, b1) = shear(deq, s, tol)?;
    let on_axis = a1.restrict_zero(Var::X);
    let scale = a1.sup_modulus().max(1.0);
    if let Some((j, c)) = on_axis
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_negligible(tol * scale))
    {
        return Err(DulacError::NotSeparatrix {
            degree: j,
            value: format!("{:?}", c.to_c64()),
        });
    }
    let q = a1.divide_exact(Var::X, tol)?;
    let a0 = q.restrict_zero(Var::X);
    let alpha = a1.coeff(2, 0);
    if alpha.is_negligible(tol) {
        return Err(DulacError::HigherTangency);
    }
    let rest = (&q - &Series2::from_series1(&a0, Var::Y)).divide_exact(Var::X, tol)?;
    let a2 = rest.scale(&alpha.inv().expect("alpha is nonzero"));
    Ok(StraightenedPair { a1, b1, a0, alpha, a2 })
}

/// `a0(y) / B1(0, y)` after cancelling one factor of `y` from each.
pub(crate) fn c_ratio<C: Coeff>(sp: &StraightenedPair<C>, tol: f64) -> Result<Series1<C>, DulacError> {
    let b = sp.b1.restrict_zero(Var::X);
    if !sp.a0.coeff(0).is_negligible(tol) || sp.a0.order() < 1 {
        return Err(DulacError::Unprepared("a0(0) must vanish".into()));
    }
    if !b.coeff(0).is_negligible(tol) || b.order() < 1 || b.coeff(1).is_negligible(tol) {
        return Err(DulacError::Unprepared("B1(0, y) must have y-order 1".into()));
    }
    let num = sp.a0.divide_by_var(tol)?;
    let den = b.divide_by_var(tol)?;
    Ok(num.divide_by_unit(&den, tol)?)
}

/// `C(y) = exp(∫₀^y a0/B1(0,·)) - 1`, the solution of
/// `B1(0, y)·C' = (1 + C)·a0` with `C(0) = 0`.
pub fn resolve_c<C: Coeff>(sp: &StraightenedPair<C>, tol: f64) -> Result<Series1<C>, DulacError> {
    Ok(c_ratio(sp, tol)?.exp_integral_minus_one())
}

/// `B1(0, y)·C' - (1 + C)·a0`.
pub fn c_residual<C: Coeff>(sp: &StraightenedPair<C>, c: &Series1<C>) -> Result<Series1<C>, DulacError> {
    let b = sp.b1.restrict_zero(Var::X);
    let lhs = b.mul_tracked(&c.derive()?);
    let one_c = &Series1::one(c.order()) + c;
    let rhs = one_c.mul_tracked(&sp.a0);
    Ok(&lhs - &rhs)
}
