//! Dulac prenormalization of saddle-nodes in the stratum 𝓔₁.
//!
//! The pipeline diagonalizes the linear part, computes the separatrix
//! `x = s(y)`, shears it onto `{x = 0}`, rescales `x` by `(1 + C(y))/α`,
//! and factors the result as `U·(x²∂x + B_D∂y)` with
//! `B_D = y + r(x) + y·R(x, y)`.

mod majorant;
mod separatrix;
mod transform;

use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::equation::{diagonalize, DiagonalizedEquation, EquationError, PlanarEquation};
use crate::series::{Series1, Series2, SeriesError, Var};

pub use majorant::{majorant_sequence, radius_estimate, radius_lower_bound, RadiusBound};
pub use separatrix::{
    recurrence_state, separatrix_oracle, separatrix_recurrence, separatrix_residual, Separatrix,
    SeparatrixRecurrenceState,
};
pub use transform::{c_residual, pushforward, resolve_c, shear, straighten, FiberedChange, StraightenedPair};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DulacError {
    #[error("input is not prepared: {0}")]
    Unprepared(String),
    #[error("order {requested} exceeds the available order {available}")]
    OrderExceeded { requested: usize, available: usize },
    #[error("supplied curve is not a separatrix: A1(0,y) has coefficient {value} at y^{degree}")]
    NotSeparatrix { degree: usize, value: String },
    #[error("k >= 2 unsupported: the coefficient of x² vanishes after straightening")]
    HigherTangency,
    #[error("change of coordinates is not invertible: {0}")]
    NotInvertible(String),
    #[error("degenerate linear equation for s_{p}")]
    DegenerateOracle { p: usize },
    #[error("no dominating bound can be derived for a non-polynomial equation; supply M and sigma")]
    RequiresBound,
    #[error("invalid majorant bound M = {m}, sigma = {sigma}")]
    InvalidBound { m: f64, sigma: f64 },
    #[error("working order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<DulacError>,
    },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl DulacError {
    /// The innermost error, without stage wrappers.
    pub fn root(&self) -> &DulacError {
        match self {
            DulacError::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Name of the outermost failing stage, if recorded.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            DulacError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    /// Whether the input lies outside the class the pipeline handles.
    pub fn is_out_of_class(&self) -> bool {
        matches!(
            self.root(),
            DulacError::HigherTangency
                | DulacError::Equation(
                    EquationError::Nilpotent
                        | EquationError::NotSaddleNode { .. }
                        | EquationError::NotSingular
                )
        )
    }
}

fn at_stage<E: Into<DulacError>>(stage: &'static str) -> impl FnOnce(E) -> DulacError {
    move |e| DulacError::Stage {
        stage,
        source: Box::new(e.into()),
    }
}

/// One entry of the coordinate-change log.
#[derive(Debug, Clone, PartialEq)]
pub enum Change<C: Coeff> {
    /// `(x, y)_old = matrix·(x, y)_new`, field multiplied by `scale`.
    Linear { matrix: [[C; 2]; 2], scale: C },
    /// New `x` is `x - s(y)`.
    Shear { s: Series1<C> },
    /// Old `x` is `x·(1 + C(y))/alpha`.
    Scale { alpha: C, c: Series1<C> },
}

fn pair<C: Coeff>(c: &C) -> Value {
    Value::Array(c.to_json_parts().to_vec())
}

impl<C: Coeff> Change<C> {
    pub fn to_json(&self) -> Value {
        match self {
            Change::Linear { matrix, scale } => json!({
                "kind": "linear",
                "matrix": matrix.iter().map(|row| row.iter().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "scale": pair(scale),
            }),
            Change::Shear { s } => json!({"kind": "shear", "s": s.to_json(Var::Y)}),
            Change::Scale { alpha, c } => json!({
                "kind": "scale",
                "alpha": pair(alpha),
                "C": c.to_json(Var::Y),
            }),
        }
    }
}

/// Output of the Dulac pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DulacNormalForm<C: Coeff> {
    pub k: u32,
    pub order: usize,
    /// `r(x) = B_D(x, 0)`.
    pub r: Series1<C>,
    /// `R = (B_D - y - r)/y`.
    pub big_r: Series2<C>,
    pub u: Series2<C>,
    pub c: Series1<C>,
    pub alpha: C,
    pub separatrix: Series1<C>,
    /// The transformed field `(A', B')`.
    pub a_prime: Series2<C>,
    pub b_prime: Series2<C>,
    pub b_d: Series2<C>,
    pub changes: Vec<Change<C>>,
    /// `‖A' - x²U‖`.
    pub residual_a: f64,
    /// `‖B' - U·B_D‖`.
    pub residual_b: f64,
    /// `residual_a + residual_b`.
    pub residual_norm: f64,
    pub separatrix_residual: f64,
    pub c_residual: f64,
    /// Smallest order among the reported series.
    pub certified_order: usize,
    /// `‖U - U_closed‖` against the closed-form expression for `U`.
    pub u_formula_discrepancy: f64,
}

impl<C: Coeff> DulacNormalForm<C> {
    /// `r(x) + y·R(x, y)`, the value of the Dulac map.
    pub fn dulac_series(&self) -> Series2<C> {
        let r = Series2::from_series1(&self.r, Var::X);
        &r + &self.big_r.mul_var(Var::Y)
    }

    /// `r(0) = r'(0) = 0`, `R(0,0) = 0` and `U(0,0) = 1`.
    pub fn constraints_hold(&self, tol: f64) -> bool {
        self.r.coeff(0).is_negligible(tol)
            && self.r.coeff(1).is_negligible(tol)
            && self.big_r.coeff(0, 0).is_negligible(tol)
            && (self.u.coeff(0, 0) - C::one()).is_negligible(tol)
    }
}

/// Runs the full pipeline at working order `n`.
pub fn dulac_map<C: Coeff>(eq: &PlanarEquation<C>, n: usize, tol: f64) -> Result<DulacNormalForm<C>, DulacError> {
    let eq = eq.at_order(n).map_err(at_stage("order"))?;
    let deq = diagonalize(&eq, tol).map_err(at_stage("diagonalize"))?;
    dulac_map_prepared(&deq, n, tol)
}

/// Pipeline on an already diagonalized equation.
pub fn dulac_map_prepared<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    n: usize,
    tol: f64,
) -> Result<DulacNormalForm<C>, DulacError> {
    if n < 2 {
        return Err(DulacError::OrderTooSmall(n));
    }
    let deq = deq.at_order(n).map_err(at_stage("order"))?;
    let mut changes = vec![Change::Linear {
        matrix: deq.change.clone(),
        scale: deq.scale.clone(),
    }];

    let sep = separatrix_recurrence(&deq, n, tol).map_err(at_stage("separatrix"))?;
    let separatrix_residual = separatrix_residual(&deq.a, &deq.b, &sep.s, tol)
        .map_err(at_stage("separatrix"))?
        .norm_factorial();
    let sp = straighten(&deq, &sep.s, tol).map_err(at_stage("straighten"))?;
    changes.push(Change::Shear { s: sep.s.clone() });

    let c = resolve_c(&sp, tol).map_err(at_stage("resolve_C"))?;
    let c_residual = c_residual(&sp, &c).map_err(at_stage("resolve_C"))?.norm_factorial();

    let one_c = &Series1::one(c.order()) + &c;
    let m = one_c.inverse(tol).map_err(at_stage("scale"))?.scale(&sp.alpha);
    let (a_prime, b_prime) =
        pushforward(&sp.a1, &sp.b1, &FiberedChange::Scale { m }, tol).map_err(at_stage("scale"))?;
    changes.push(Change::Scale {
        alpha: sp.alpha.clone(),
        c: c.clone(),
    });

    let factor = || -> Result<_, DulacError> {
        let u = a_prime.divide_exact(Var::X, tol)?.divide_exact(Var::X, tol)?;
        let b_d = b_prime.divide_by_unit(&u, tol)?;
        let r = b_d.restrict_zero(Var::Y);
        let head = &Series2::var(Var::Y, b_d.order()) + &Series2::from_series1(&r, Var::X);
        let big_r = (&b_d - &head).divide_exact(Var::Y, tol)?;
        Ok((u, b_d, r, big_r))
    };
    let (u, b_d, r, big_r) = factor().map_err(at_stage("factor"))?;

    let residual_a = (&a_prime - &u.mul_var(Var::X).mul_var(Var::X)).norm_factorial();
    let residual_b = (&b_prime - &u.mul_tracked(&b_d)).norm_factorial();
    let u_formula_discrepancy = u_closed_form(&sp, &c, tol)
        .map(|v| (&u - &v).norm_factorial())
        .unwrap_or(f64::INFINITY);
    let certified_order = [r.order(), big_r.order(), u.order(), b_d.order()]
        .into_iter()
        .min()
        .expect("nonempty");

    Ok(DulacNormalForm {
        k: 1,
        order: n,
        r,
        big_r,
        u,
        c,
        alpha: sp.alpha.clone(),
        separatrix: sep.s,
        a_prime,
        b_prime,
        b_d,
        changes,
        residual_a,
        residual_b,
        residual_norm: residual_a + residual_b,
        separatrix_residual,
        c_residual,
        certified_order,
        u_formula_discrepancy,
    })
}

/// `U = (1 + C)·[a0/B1(0,y)·(B1(0,y) - B1(X,y))/(αX) + A2(X,y)]` at
/// `X = x(1 + C(y))/α`.
fn u_closed_form<C: Coeff>(sp: &StraightenedPair<C>, c: &Series1<C>, tol: f64) -> Result<Series2<C>, DulacError> {
    let ratio = transform::c_ratio(sp, tol)?;
    let b0 = Series2::from_series1(&sp.b1.restrict_zero(Var::X), Var::Y);
    let diff = (&b0 - &sp.b1).divide_exact(Var::X, tol)?;
    let inv_alpha = sp.alpha.inv().expect("alpha is nonzero");
    let first = Series2::from_series1(&ratio, Var::Y).mul_tracked(&diff).scale(&inv_alpha);
    let one_c = &Series1::one(c.order()) + c;
    let inner = Series2::from_series1(&one_c, Var::Y).mul_tracked(&(&first + &sp.a2));
    let psi = Series2::from_series1(&one_c.scale(&inv_alpha), Var::Y).mul_var(Var::X);
    Ok(inner.substitute(Var::X, &psi, tol)?)
}
