//! Planar equations `A dy = B dx` with a singular point at the origin.
//!
//! The associated vector field is `X = A∂x + B∂y`, so a curve `x = s(y)` is
//! invariant exactly when `A(s(y), y) = B(s(y), y)·s'(y)`.

use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::dulac;
use crate::series::{Series2, SeriesError, SeriesJsonError, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquationError {
    #[error("A(0,0) and B(0,0) must vanish: the origin is not a singular point")]
    NotSingular,
    #[error("linear part is nilpotent: both eigenvalues vanish")]
    Nilpotent,
    #[error("linear part has no zero eigenvalue (regime {regime})")]
    NotSaddleNode { regime: Regime },
    #[error("equation is not in prepared form: {0}")]
    Unprepared(String),
    #[error("order {requested} exceeds the known order {available} of a non-polynomial equation")]
    OrderExceeded { requested: usize, available: usize },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Json(#[from] SeriesJsonError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The pair `(A, B)` at a shared truncation order.
///
/// `polynomial` marks equations whose coefficients beyond the stored terms
/// are known to vanish; such equations can be lifted to any order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarEquation<C: Coeff> {
    a: Series2<C>,
    b: Series2<C>,
    polynomial: bool,
}

impl<C: Coeff> PlanarEquation<C> {
    /// Builds an equation from two series. Non-polynomial inputs are cut to
    /// the smaller order; polynomial ones are lifted to the larger.
    pub fn new(a: Series2<C>, b: Series2<C>, polynomial: bool) -> Result<Self, EquationError> {
        if !a.coeff(0, 0).is_zero() || !b.coeff(0, 0).is_zero() {
            return Err(EquationError::NotSingular);
        }
        let (a, b) = if polynomial {
            let n = a.order().max(b.order());
            (a.extend_polynomial(n)?, b.extend_polynomial(n)?)
        } else {
            let n = a.order().min(b.order());
            (a.jet(n)?, b.jet(n)?)
        };
        Ok(Self { a, b, polynomial })
    }

    /// Polynomial equation from `(i, j, coefficient)` triples.
    pub fn polynomial(
        order: usize,
        a: impl IntoIterator<Item = (usize, usize, C)>,
        b: impl IntoIterator<Item = (usize, usize, C)>,
    ) -> Result<Self, EquationError> {
        Self::new(
            Series2::from_terms(order, a)?,
            Series2::from_terms(order, b)?,
            true,
        )
    }

    pub fn a(&self) -> &Series2<C> {
        &self.a
    }

    pub fn b(&self) -> &Series2<C> {
        &self.b
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// The equation at order `n`: a jet when `n` is below the current
    /// order, a zero-padded lift for polynomials, an error otherwise.
    pub fn at_order(&self, n: usize) -> Result<Self, EquationError> {
        if n <= self.order() {
            return Ok(Self {
                a: self.a.jet(n)?,
                b: self.b.jet(n)?,
                polynomial: self.polynomial,
            });
        }
        if !self.polynomial {
            return Err(EquationError::OrderExceeded {
                requested: n,
                available: self.order(),
            });
        }
        Ok(Self {
            a: self.a.extend_polynomial(n)?,
            b: self.b.extend_polynomial(n)?,
            polynomial: true,
        })
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PlanarEquation<D> {
        PlanarEquation {
            a: self.a.map(&f),
            b: self.b.map(&f),
            polynomial: self.polynomial,
        }
    }

    /// Jacobian of `(A, B)` at the origin.
    pub fn linear_matrix(&self) -> [[C; 2]; 2] {
        [
            [self.a.coeff(1, 0), self.a.coeff(0, 1)],
            [self.b.coeff(1, 0), self.b.coeff(0, 1)],
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({"A": self.a.to_json(), "B": self.b.to_json(), "polynomial": self.polynomial})
    }

    /// Reads `{"A": …, "B": …, "polynomial": bool}`. When `polynomial` is
    /// absent it is inferred: an equation whose top degree is empty is
    /// taken to be a polynomial.
    pub fn from_json(v: &Value) -> Result<Self, EquationError> {
        let field = |name: &str| {
            v.get(name).ok_or_else(|| EquationError::Schema {
                path: format!("$.{name}"),
                message: "missing field".into(),
            })
        };
        let a = Series2::from_json_at(field("A")?, "$.A")?;
        let b = Series2::from_json_at(field("B")?, "$.B")?;
        let polynomial = match v.get("polynomial") {
            None => {
                let below = |s: &Series2<C>| s.max_degree().is_none_or(|d| d < s.order());
                below(&a) && below(&b)
            }
            Some(Value::Bool(p)) => *p,
            Some(_) => {
                return Err(EquationError::Schema {
                    path: "$.polynomial".into(),
                    message: "expected a boolean".into(),
                })
            }
        };
        Self::new(a, b, polynomial)
    }
}

/// Classification of the linear part by its eigenvalue ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Regime {
    /// `λ = 0`: one zero and one nonzero eigenvalue.
    SaddleNode,
    /// `λ ∉ ℝ≤0` and non-resonant.
    Linearizable,
    /// `λ ∈ ℕ ∪ 1/ℕ`.
    PolynomialNormalizable,
    /// `λ ∈ ℝ<0`.
    Other,
    /// Both eigenvalues vanish.
    Unsupported,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::SaddleNode => "SaddleNode",
            Regime::Linearizable => "Linearizable",
            Regime::PolynomialNormalizable => "PolynomialNormalizable",
            Regime::Other => "Other",
            Regime::Unsupported => "unsupported",
        })
    }
}

/// Linear part of an equation and its eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPart<C: Coeff> {
    pub matrix: [[C; 2]; 2],
    pub lambda1: Complex64,
    /// Nonzero whenever some eigenvalue is nonzero.
    pub lambda2: Complex64,
    /// `λ1 / λ2`, absent for nilpotent linear parts.
    pub lambda: Option<Complex64>,
    pub regime: Regime,
}

fn matrix_scale<C: Coeff>(m: &[[C; 2]; 2]) -> f64 {
    m.iter()
        .flatten()
        .map(Coeff::modulus)
        .fold(1.0, f64::max)
}

fn det<C: Coeff>(m: &[[C; 2]; 2]) -> C {
    m[0][0].mul_ref(&m[1][1]) - m[0][1].mul_ref(&m[1][0])
}

fn trace<C: Coeff>(m: &[[C; 2]; 2]) -> C {
    m[0][0].clone() + m[1][1].clone()
}

fn nearest_integer(z: Complex64, tol: f64) -> Option<i64> {
    let r = z.re.round();
    (z.im.abs() <= tol && (z.re - r).abs() <= tol && r >= 1.0).then_some(r as i64)
}

fn regime_of(lambda: Complex64, tol: f64) -> Regime {
    let scale = lambda.norm().max(1.0);
    if lambda.norm() <= tol {
        return Regime::SaddleNode;
    }
    if lambda.im.abs() <= tol * scale && lambda.re < 0.0 {
        return Regime::Other;
    }
    if nearest_integer(lambda, tol * scale).is_some() || nearest_integer(lambda.inv(), tol).is_some() {
        return Regime::PolynomialNormalizable;
    }
    Regime::Linearizable
}

/// Whether the linear part has exactly one zero eigenvalue (class 𝓔).
fn saddle_node_data<C: Coeff>(m: &[[C; 2]; 2], tol: f64) -> Option<C> {
    let s = matrix_scale(m);
    let tr = trace(m);
    (det(m).is_negligible(tol * s * s) && !tr.is_negligible(tol * s)).then_some(tr)
}

/// Eigenvalues and regime of the linear part.
pub fn linear_classify<C: Coeff>(eq: &PlanarEquation<C>, tol: f64) -> LinearPart<C> {
    let matrix = eq.linear_matrix();
    let s = matrix_scale(&matrix);
    let zero = Complex64::new(0.0, 0.0);
    if let Some(mu) = saddle_node_data(&matrix, tol) {
        return LinearPart {
            matrix,
            lambda1: zero,
            lambda2: mu.to_c64(),
            lambda: Some(zero),
            regime: Regime::SaddleNode,
        };
    }
    let tr = trace(&matrix).to_c64();
    let d = det(&matrix).to_c64();
    if d.norm() <= tol * s * s {
        return LinearPart {
            matrix,
            lambda1: zero,
            lambda2: zero,
            lambda: None,
            regime: Regime::Unsupported,
        };
    }
    let disc = (tr * tr - 4.0 * d).sqrt();
    let (mut l1, mut l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    // λ1 is the eigenvalue attached to the x-direction.
    let m00 = matrix[0][0].to_c64();
    if (l2 - m00).norm() < (l1 - m00).norm() {
        std::mem::swap(&mut l1, &mut l2);
    }
    let lambda = l1 / l2;
    LinearPart {
        matrix,
        lambda1: l1,
        lambda2: l2,
        lambda: Some(lambda),
        regime: regime_of(lambda, tol),
    }
}

/// An equation in prepared form: `A = o(|x, y|)` and `B = y + o(|x, y|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizedEquation<C: Coeff> {
    pub a: Series2<C>,
    pub b: Series2<C>,
    /// Columns are the kernel and nonzero eigenvectors: old = change · new.
    pub change: [[C; 2]; 2],
    pub change_inverse: [[C; 2]; 2],
    /// The time rescaling `1/λ2` applied to the field.
    pub scale: C,
    pub polynomial: bool,
}

impl<C: Coeff> DiagonalizedEquation<C> {
    /// Wraps an already prepared pair with the identity change.
    pub fn prepared(a: Series2<C>, b: Series2<C>, polynomial: bool, tol: f64) -> Result<Self, EquationError> {
        let eq = PlanarEquation::new(a, b, polynomial)?;
        let deq = Self {
            a: eq.a,
            b: eq.b,
            change: identity(),
            change_inverse: identity(),
            scale: C::one(),
            polynomial,
        };
        deq.check_prepared(tol)?;
        Ok(deq)
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn equation(&self) -> PlanarEquation<C> {
        PlanarEquation {
            a: self.a.clone(),
            b: self.b.clone(),
            polynomial: self.polynomial,
        }
    }

    pub fn check_prepared(&self, tol: f64) -> Result<(), EquationError> {
        let checks = [
            ("A(0,0)", self.a.coeff(0, 0), C::zero()),
            ("A_10", self.a.coeff(1, 0), C::zero()),
            ("A_01", self.a.coeff(0, 1), C::zero()),
            ("B(0,0)", self.b.coeff(0, 0), C::zero()),
            ("B_10", self.b.coeff(1, 0), C::zero()),
            ("B_01", self.b.coeff(0, 1), C::one()),
        ];
        for (name, got, want) in checks {
            if !(got.clone() - want.clone()).is_negligible(tol) {
                return Err(EquationError::Unprepared(format!(
                    "{name} is {:?}, expected {:?}",
                    got.to_c64(),
                    want.to_c64()
                )));
            }
        }
        Ok(())
    }

    /// Same equation at order `n` (jet, or lift when polynomial).
    pub fn at_order(&self, n: usize) -> Result<Self, EquationError> {
        let eq = self.equation().at_order(n)?;
        Ok(Self {
            a: eq.a,
            b: eq.b,
            ..self.clone()
        })
    }
}

fn identity<C: Coeff>() -> [[C; 2]; 2] {
    [[C::one(), C::zero()], [C::zero(), C::one()]]
}

fn normalized<C: Coeff>(v: [C; 2], by: usize) -> [C; 2] {
    let inv = v[by].inv().expect("normalizing component is nonzero");
    [v[0].mul_ref(&inv), v[1].mul_ref(&inv)]
}

fn pick_larger<C: Coeff>(u: [C; 2], w: [C; 2]) -> [C; 2] {
    let size = |v: &[C; 2]| v[0].modulus().max(v[1].modulus());
    if size(&w) > size(&u) {
        w
    } else {
        u
    }
}

/// Linear change to prepared form for class 𝓔.
///
/// The kernel eigenvector becomes the x-axis, the eigenvector of `μ = λ2`
/// the y-axis, and the field is divided by `μ`.
pub fn diagonalize<C: Coeff>(eq: &PlanarEquation<C>, tol: f64) -> Result<DiagonalizedEquation<C>, EquationError> {
    let m = eq.linear_matrix();
    let mu = match saddle_node_data(&m, tol) {
        Some(mu) => mu,
        None => {
            let lin = linear_classify(eq, tol);
            return Err(if lin.regime == Regime::Unsupported {
                EquationError::Nilpotent
            } else {
                EquationError::NotSaddleNode { regime: lin.regime }
            });
        }
    };
    let [[a, b], [c, d]] = m.clone();

    // Kernel vector (b, -a) or (d, -c), normalized by its first nonzero entry.
    let v0 = pick_larger([b.clone(), -a.clone()], [d.clone(), -c.clone()]);
    let v0 = if !v0[0].is_zero() { normalized(v0, 0) } else { normalized(v0, 1) };
    // μ-eigenvector (b, μ - a) or (μ - d, c).
    let v1 = pick_larger([b, mu.clone() - a], [mu.clone() - d, c]);
    let v1 = if !v1[1].is_zero() { normalized(v1, 1) } else { normalized(v1, 0) };

    let change = [[v0[0].clone(), v1[0].clone()], [v0[1].clone(), v1[1].clone()]];
    let dp = det(&change);
    let dinv = dp.inv().ok_or_else(|| EquationError::Unprepared("defective linear part".into()))?;
    let change_inverse = [
        [change[1][1].mul_ref(&dinv), (-change[0][1].clone()).mul_ref(&dinv)],
        [(-change[1][0].clone()).mul_ref(&dinv), change[0][0].mul_ref(&dinv)],
    ];
    let scale = mu.inv().expect("trace is nonzero");

    let a_p = eq.a.substitute_linear(&change);
    let b_p = eq.b.substitute_linear(&change);
    let combine = |r: &[C; 2]| {
        let t = &a_p.scale(&r[0]) + &b_p.scale(&r[1]);
        t.scale(&scale)
    };
    let mut a_new = combine(&change_inverse[0]);
    let mut b_new = combine(&change_inverse[1]);
    if !C::EXACT {
        snap_linear_part(&mut a_new, &mut b_new, tol);
    }
    let deq = DiagonalizedEquation {
        a: a_new,
        b: b_new,
        change,
        change_inverse,
        scale,
        polynomial: eq.polynomial,
    };
    deq.check_prepared(tol)?;
    Ok(deq)
}

/// Replaces rounding noise in the linear part by the exact `diag(0, 1)`.
fn snap_linear_part<C: Coeff>(a: &mut Series2<C>, b: &mut Series2<C>, tol: f64) {
    let fix = |s: &Series2<C>, i: usize, j: usize, want: C| -> Series2<C> {
        let got = s.coeff(i, j);
        if (got.clone() - want.clone()).is_negligible(tol) && got != want {
            let corr = Series2::monomial(i, j, want - got, s.order());
            s + &corr
        } else {
            s.clone()
        }
    };
    *a = fix(&fix(a, 1, 0, C::zero()), 0, 1, C::zero());
    *b = fix(&fix(b, 1, 0, C::zero()), 0, 1, C::one());
}

/// Outcome of the 𝓔₁ stratum test.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport<C: Coeff> {
    pub in_e1: bool,
    /// Coefficient of `x²` in the prepared `A`.
    pub a20: C,
    /// `Some(1)` on 𝓔₁; `None` means the tangency order is at least 2.
    pub k: Option<u32>,
    /// Coefficient of `x` in `A1/x` after straightening the separatrix.
    pub a_after_straightening: Option<C>,
}

/// Tests `A_20 ≠ 0` and cross-checks it against the straightened form.
pub fn stratum_e1_test<C: Coeff>(deq: &DiagonalizedEquation<C>, tol: f64) -> StratumReport<C> {
    let a20 = deq.a.coeff(2, 0);
    let in_e1 = !a20.is_negligible(tol);
    let a_after_straightening = (deq.order() >= 2)
        .then(|| {
            let sep = dulac::separatrix_recurrence(deq, deq.order(), tol).ok()?;
            let (a1, _) = dulac::shear(deq, &sep.s, tol).ok()?;
            Some(a1.divide_exact(Var::X, tol).ok()?.coeff(1, 0))
        })
        .flatten();
    StratumReport {
        in_e1,
        a20,
        k: in_e1.then_some(1),
        a_after_straightening,
    }
}

/// Full classification: linear part, and the stratum test on class 𝓔.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<C: Coeff> {
    pub linear: LinearPart<C>,
    pub stratum: Option<StratumReport<C>>,
}

impl<C: Coeff> Classification<C> {
    pub fn in_e1(&self) -> bool {
        self.stratum.as_ref().is_some_and(|s| s.in_e1)
    }
}

pub fn classify<C: Coeff>(eq: &PlanarEquation<C>, tol: f64) -> Classification<C> {
    let linear = linear_classify(eq, tol);
    let stratum = if linear.regime == Regime::SaddleNode {
        diagonalize(eq, tol).ok().map(|deq| stratum_e1_test(&deq, tol))
    } else {
        None
    };
    Classification { linear, stratum }
}

/// Membership in `𝒫_d`: polynomial of degree `<= d` and in 𝓔₁.
pub fn polynomial_family_check<C: Coeff>(eq: &PlanarEquation<C>, d: usize, tol: f64) -> bool {
    let excess = |s: &Series2<C>| s.terms().any(|(k, c)| k.degree() > d && !c.is_negligible(tol));
    if excess(&eq.a) || excess(&eq.b) {
        return false;
    }
    classify(eq, tol).in_e1()
}
