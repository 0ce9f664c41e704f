//! JSON blocks of a report.

use dulac_core::dulac::{DulacNormalForm, RadiusBound};
use dulac_core::equation::{Classification, PlanarEquation, Regime};
use dulac_core::germ_space::{DuvalStage, Freedom, SchafkeCertificate};
use dulac_core::{Coeff, Float, Series2, Var};
use serde_json::{json, Value};

use crate::RunConfig;

pub fn pair<C: Coeff>(c: &C) -> Value {
    Value::Array(c.to_json_parts().to_vec())
}

pub fn complex(z: Float) -> Value {
    pair(&z)
}

/// Finite floats as numbers, anything else as `null`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(if x == 0.0 { 0.0 } else { x })
    } else {
        Value::Null
    }
}

pub fn config_block(cfg: &RunConfig) -> Value {
    json!({
        "backend": cfg.backend.to_string(),
        "order": cfg.order,
        "tol": number(cfg.tol),
    })
}

/// Regime name used in reports; saddle-nodes outside 𝓔₁ keep their
/// regime and are flagged through `in_E1`.
pub fn regime_name(regime: Regime) -> String {
    regime.to_string()
}

/// Batch category of a classification.
pub fn category<C: Coeff>(c: &Classification<C>) -> String {
    match c.linear.regime {
        Regime::SaddleNode if c.in_e1() => "SaddleNode/E1".into(),
        Regime::SaddleNode | Regime::Unsupported => "unsupported".into(),
        r => r.to_string(),
    }
}

/// Whether classification alone places the input outside the handled
/// classes (nilpotent, or a saddle-node with `k >= 2`).
pub fn is_out_of_class<C: Coeff>(c: &Classification<C>) -> bool {
    category(c) == "unsupported"
}

pub fn classification_block<C: Coeff>(
    eq: &PlanarEquation<C>,
    c: &Classification<C>,
    cfg: &RunConfig,
) -> Value {
    let stratum = c.stratum.as_ref();
    let mut block = json!({
        "lambda": c.linear.lambda.map_or(Value::Null, complex),
        "lambda1": complex(c.linear.lambda1),
        "lambda2": complex(c.linear.lambda2),
        "regime": regime_name(c.linear.regime),
        "in_E1": c.in_e1(),
        "k": stratum.and_then(|s| s.k),
        "A20": stratum.map_or(Value::Null, |s| pair(&s.a20)),
        "A20_straightened": stratum
            .and_then(|s| s.a_after_straightening.as_ref())
            .map_or(Value::Null, pair),
    });
    if let Some(d) = cfg.degree {
        let member = dulac_core::equation::polynomial_family_check(eq, d, cfg.core_tol());
        block["polynomial_family"] = json!({"degree": d, "member": member});
    }
    block
}

pub fn radius_block(bound: &RadiusBound) -> Value {
    json!({
        "M": number(bound.m),
        "sigma": number(bound.sigma),
        "estimate": bound.estimate.map_or(Value::Null, number),
        "order": bound.order,
        "hypothesis_holds": bound.hypothesis_holds,
        "dominated": bound.dominated,
    })
}

pub fn pipeline_block<C: Coeff>(nf: &DulacNormalForm<C>, radius: Option<&RadiusBound>) -> Value {
    json!({
        "k": nf.k,
        "order": nf.order,
        "separatrix": nf.separatrix.to_json(Var::Y),
        "C": nf.c.to_json(Var::Y),
        "alpha": pair(&nf.alpha),
        "r": nf.r.to_json(Var::X),
        "R": nf.big_r.to_json(),
        "U": nf.u.to_json(),
        "residual_norm": number(nf.residual_norm),
        "changes": nf.changes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "radius_bound": radius.map_or(Value::Null, radius_block),
    })
}

/// `‖𝓓(A, B)‖ = ‖B_D - y‖`.
pub fn dulac_norm<C: Coeff>(nf: &DulacNormalForm<C>) -> f64 {
    (&nf.b_d - &Series2::var(Var::Y, nf.b_d.order())).norm_factorial()
}

pub fn norms_block<C: Coeff>(eq: &PlanarEquation<C>, nf: Option<&DulacNormalForm<C>>) -> Value {
    json!({
        "A": number(eq.a().norm_factorial()),
        "B": number(eq.b().norm_factorial()),
        "D": nf.map_or(Value::Null, |nf| number(dulac_norm(nf))),
    })
}

pub fn residual_block<C: Coeff>(nf: &DulacNormalForm<C>, threshold: f64) -> Value {
    json!({
        "residual_norm": number(nf.residual_norm),
        "residual_A": number(nf.residual_a),
        "residual_B": number(nf.residual_b),
        "separatrix_residual": number(nf.separatrix_residual),
        "C_residual": number(nf.c_residual),
        "U_formula_discrepancy": number(nf.u_formula_discrepancy),
        "certified_order": nf.certified_order,
        "threshold": number(threshold),
    })
}

pub fn freedom_block(f: Freedom) -> Value {
    match f {
        Freedom::Free { p } => json!({"verdict": "free", "p": p}),
        Freedom::Undetermined { max_p } => json!({"verdict": "undetermined", "max_p": max_p}),
    }
}

pub fn schafke_block(c: &SchafkeCertificate) -> Value {
    json!({
        "min_N": c.min_n,
        "order": c.order,
        "member": c.is_member(),
        "constant_violation": c.constant_violation,
        "a0_modulus": number(c.a0_modulus),
    })
}

pub fn duval_row(s: &DuvalStage) -> Value {
    json!({
        "n": s.n,
        "eps": number(s.eps),
        "degree": s.degree,
        "samples": s.samples,
        "sup_plus": number(s.sup_plus),
        "sup_minus": number(s.sup_minus),
        "sup_disc": number(s.sup_disc),
        "condition": number(s.condition),
        "reliable": s.reliable,
        "within_sqrt_n": s.within_sqrt_n(),
    })
}
