use dulac_core::dulac::{
    dulac_map, dulac_map_prepared, majorant_sequence, pushforward, radius_lower_bound, recurrence_state,
    resolve_c, separatrix_oracle, separatrix_recurrence, separatrix_residual, straighten, c_residual, DulacError,
    FiberedChange,
};
use dulac_core::equation::{diagonalize, DiagonalizedEquation, PlanarEquation};
use dulac_core::{Coeff, Exact, Float, Series1, Series2, Var};

const TOL: f64 = 1e-9;

fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

fn poly(order: usize, t: &[(usize, usize, i64, i64)]) -> Series2<Exact> {
    Series2::from_terms(order, t.iter().map(|&(i, j, n, d)| (i, j, q(n, d)))).unwrap()
}

fn prepared(order: usize, a: &[(usize, usize, i64, i64)], b: &[(usize, usize, i64, i64)]) -> DiagonalizedEquation<Exact> {
    DiagonalizedEquation::prepared(poly(order, a), poly(order, b), true, TOL).unwrap()
}

fn x2_plus_y2(order: usize) -> DiagonalizedEquation<Exact> {
    prepared(order, &[(2, 0, 1, 1), (0, 2, 1, 1)], &[(0, 1, 1, 1)])
}

#[test]
fn separatrix_examples() {
    let zero = separatrix_recurrence(&prepared(8, &[(2, 0, 1, 1)], &[(0, 1, 1, 1)]), 8, TOL).unwrap();
    assert!(zero.s.is_zero());
    let xy = separatrix_recurrence(&prepared(8, &[(1, 1, 1, 1)], &[(0, 1, 1, 1)]), 8, TOL).unwrap();
    assert!(xy.s.is_zero());

    let s = separatrix_recurrence(&x2_plus_y2(16), 16, TOL).unwrap().s;
    assert_eq!(s.coeff(0), &q(0, 1));
    assert_eq!(s.coeff(1), &q(0, 1));
    assert_eq!(s.coeff(2), &q(1, 2));
    assert_eq!(s.coeff(3), &q(0, 1));
    assert_eq!(s.coeff(4), &q(1, 16));
}

#[test]
fn oracle_agrees_with_recurrence() {
    let deq = x2_plus_y2(16);
    assert_eq!(
        separatrix_recurrence(&deq, 16, TOL).unwrap(),
        separatrix_oracle(&deq, 16, TOL).unwrap()
    );
    let d = prepared(8, &[(2, 0, 1, 1)], &[(0, 1, 1, 1)]);
    assert!(separatrix_oracle(&d, 8, TOL).unwrap().s.is_zero());
    // Mixed terms in both components.
    let deq = prepared(
        12,
        &[(2, 0, 1, 1), (0, 2, -1, 3), (1, 1, 2, 1), (0, 3, 1, 2)],
        &[(0, 1, 1, 1), (1, 1, 1, 4), (0, 2, 3, 1), (2, 0, 1, 1)],
    );
    let s = separatrix_recurrence(&deq, 12, TOL).unwrap();
    assert_eq!(s, separatrix_oracle(&deq, 12, TOL).unwrap());
    assert!(separatrix_residual(&deq.a, &deq.b, &s.s, TOL).unwrap().is_zero());
}

#[test]
fn recurrence_reads_only_earlier_coefficients() {
    let deq = prepared(
        14,
        &[(2, 0, 1, 1), (0, 2, 1, 1), (1, 2, 1, 1), (3, 1, 2, 1)],
        &[(0, 1, 1, 1), (0, 2, 1, 1), (2, 1, 1, 1)],
    );
    let st = recurrence_state(&deq, 14, TOL).unwrap();
    for (p, read) in st.max_read.iter().enumerate() {
        if let Some(q) = read {
            assert!(*q < p);
        }
    }
    assert_eq!(st.table[0][0], q(1, 1));
    // Convolution powers of s vanish below degree 2n.
    for (n, row) in st.table.iter().enumerate().skip(1) {
        for (j, c) in row.iter().enumerate() {
            if j < 2 * n {
                assert!(c.is_zero());
            }
        }
    }
}

#[test]
fn unprepared_and_excess_order_rejected() {
    let deq = x2_plus_y2(6);
    assert!(matches!(
        separatrix_recurrence(&deq, 7, TOL),
        Err(DulacError::OrderExceeded { .. })
    ));
    let bad = DiagonalizedEquation::prepared(poly(4, &[(1, 0, 1, 1)]), poly(4, &[(0, 1, 1, 1)]), true, TOL);
    assert!(bad.is_err());
}

#[test]
fn straighten_examples() {
    let deq = prepared(8, &[(2, 0, 1, 1)], &[(0, 1, 1, 1)]);
    let sp = straighten(&deq, &Series1::zero(8), TOL).unwrap();
    assert_eq!(sp.a1, poly(8, &[(2, 0, 1, 1)]));
    assert_eq!(sp.b1, poly(8, &[(0, 1, 1, 1)]));
    assert!(sp.a0.is_zero());
    assert_eq!(sp.alpha, q(1, 1));
    assert_eq!(sp.a2.coeff(0, 0), q(1, 1));
    assert_eq!(sp.a2.num_terms(), 1);

    let deq = x2_plus_y2(10);
    let s = separatrix_recurrence(&deq, 10, TOL).unwrap().s;
    let sp = straighten(&deq, &s, TOL).unwrap();
    // Oracle: (x+s)² + y² - s'·y = x² + 2xs, since s² + y² = y·s'.
    let two_s = Series2::from_series1(&s.scale(&q(2, 1)), Var::Y).mul_var(Var::X);
    let want = &Series2::monomial(2, 0, q(1, 1), 10) + &two_s;
    assert_eq!(sp.a1, want.jet(10).unwrap());
    assert_eq!(sp.b1, Series2::var(Var::Y, 10));
    assert_eq!(sp.a0, s.scale(&q(2, 1)).jet(9).unwrap());
    assert_eq!(sp.alpha, q(1, 1));
    assert_eq!(sp.a2, Series2::one(8));

    let cubic = prepared(8, &[(3, 0, 1, 1)], &[(0, 1, 1, 1)]);
    assert_eq!(straighten(&cubic, &Series1::zero(8), TOL), Err(DulacError::HigherTangency));

    let wrong = Series1::monomial(2, q(1, 1), 10);
    assert!(matches!(
        straighten(&deq, &wrong, TOL),
        Err(DulacError::NotSeparatrix { .. })
    ));
}

#[test]
fn resolve_c_examples() {
    let deq = prepared(8, &[(2, 0, 1, 1)], &[(0, 1, 1, 1)]);
    let sp = straighten(&deq, &Series1::zero(8), TOL).unwrap();
    assert!(resolve_c(&sp, TOL).unwrap().is_zero());

    // a0 = y, B1(0,y) = y: C = e^y - 1.
    let deq = prepared(10, &[(2, 0, 1, 1), (1, 1, 1, 1)], &[(0, 1, 1, 1)]);
    let sp = straighten(&deq, &Series1::zero(10), TOL).unwrap();
    let c = resolve_c(&sp, TOL).unwrap();
    let mut fact = 1i64;
    for k in 1..=c.order() {
        fact *= k as i64;
        assert_eq!(c.coeff(k), &q(1, fact));
    }

    let deq = x2_plus_y2(14);
    let s = separatrix_recurrence(&deq, 14, TOL).unwrap().s;
    let sp = straighten(&deq, &s, TOL).unwrap();
    let c = resolve_c(&sp, TOL).unwrap();
    assert!(c.order() >= 12);
    assert!(c_residual(&sp, &c).unwrap().jet(12).unwrap().is_zero());
    // e^{y²/2 + y⁴/32 + …} - 1 = y²/2 + (1/8 + 1/32) y⁴ + …
    assert_eq!(c.coeff(2), &q(1, 2));
    assert_eq!(c.coeff(4), &q(5, 32));
}

#[test]
fn pushforward_examples() {
    let a = poly(8, &[(2, 0, 1, 1), (0, 2, 1, 1), (1, 3, 2, 1)]);
    let b = poly(8, &[(0, 1, 1, 1), (1, 1, 1, 2)]);
    let id = FiberedChange::Shear { s: Series1::zero(8) };
    assert_eq!(pushforward(&a, &b, &id, TOL).unwrap(), (a.clone(), b.clone()));

    let s = Series1::new(8, vec![q(0, 1), q(0, 1), q(1, 3), q(-1, 2)]).unwrap();
    let (a1, b1) = pushforward(&a, &b, &FiberedChange::Shear { s: s.clone() }, TOL).unwrap();
    let (a2, b2) = pushforward(&a1, &b1, &FiberedChange::Shear { s: s.scale(&q(-1, 1)) }, TOL).unwrap();
    assert_eq!(a2.jet(a2.order()).unwrap(), a.jet(a2.order()).unwrap());
    assert_eq!(b2, b.jet(b2.order()).unwrap());

    let non_invertible = FiberedChange::Scale { m: Series1::zero(8) };
    assert!(matches!(
        pushforward(&a, &b, &non_invertible, TOL),
        Err(DulacError::NotInvertible(_))
    ));
}

#[test]
fn dulac_fixed_points() {
    let eq = PlanarEquation::new(poly(16, &[(2, 0, 1, 1)]), poly(16, &[(0, 1, 1, 1)]), true).unwrap();
    let nf = dulac_map(&eq, 16, TOL).unwrap();
    assert!(nf.r.is_zero());
    assert!(nf.big_r.is_zero());
    assert_eq!(nf.u, Series2::one(14));
    assert!(nf.c.is_zero());
    assert_eq!(nf.residual_norm, 0.0);

    let eq = PlanarEquation::new(poly(16, &[(2, 0, 1, 1)]), poly(16, &[(0, 1, 1, 1), (2, 0, 1, 1)]), true).unwrap();
    let nf = dulac_map(&eq, 16, TOL).unwrap();
    assert_eq!(nf.r, Series1::monomial(2, q(1, 1), nf.r.order()));
    assert!(nf.big_r.is_zero());
    assert_eq!(nf.u, Series2::one(14));

    // y + r(x) + yR(x, y) with nontrivial R.
    let b = poly(16, &[(0, 1, 1, 1), (2, 0, 3, 1), (5, 0, -1, 2), (1, 1, 1, 1), (2, 3, 1, 7)]);
    let eq = PlanarEquation::new(poly(16, &[(2, 0, 1, 1)]), b.clone(), true).unwrap();
    let nf = dulac_map(&eq, 16, TOL).unwrap();
    assert_eq!(nf.r, b.restrict_zero(Var::Y).jet(nf.r.order()).unwrap());
    let want_r = poly(16, &[(1, 0, 1, 1), (2, 2, 1, 7)]);
    assert_eq!(nf.big_r, want_r.jet(nf.big_r.order()).unwrap());
}

#[test]
fn dulac_x2_plus_y2() {
    let nf = dulac_map_prepared(&x2_plus_y2(16), 16, TOL).unwrap();
    assert_eq!(nf.residual_norm, 0.0);
    assert_eq!(nf.certified_order, 14);
    assert!(nf.constraints_hold(0.0));
    assert_eq!(nf.u_formula_discrepancy, 0.0);
    assert_eq!(nf.changes.len(), 3);

    let float = x2_plus_y2(16);
    let float = DiagonalizedEquation::prepared(float.a.map(Coeff::to_c64), float.b.map(Coeff::to_c64), true, TOL).unwrap();
    let nf_f = dulac_map_prepared(&float, 16, TOL).unwrap();
    assert!(nf_f.residual_norm <= 1e-10);
    assert!(nf_f.u.approx_eq(&nf.u.map(Coeff::to_c64), 1e-10));
    assert!(nf_f.big_r.approx_eq(&nf.big_r.map(Coeff::to_c64), 1e-10));
}

#[test]
fn dulac_rejects_out_of_class() {
    let eq = PlanarEquation::new(poly(8, &[(3, 0, 1, 1)]), poly(8, &[(0, 1, 1, 1)]), true).unwrap();
    let err = dulac_map(&eq, 8, TOL).unwrap_err();
    assert_eq!(err.root(), &DulacError::HigherTangency);
    assert_eq!(err.stage(), Some("straighten"));
    assert!(err.is_out_of_class());

    let nil = PlanarEquation::new(poly(8, &[(0, 1, 1, 1)]), poly(8, &[(2, 0, 1, 1)]), true).unwrap();
    assert!(dulac_map(&nil, 8, TOL).unwrap_err().is_out_of_class());
}

#[test]
fn dulac_after_linear_change() {
    // Linear part [[1,-1],[2,-2]] (trace -1, det 0).
    let eq = PlanarEquation::new(
        poly(16, &[(1, 0, 1, 1), (0, 1, -1, 1), (2, 0, 1, 1), (0, 2, 1, 3)]),
        poly(16, &[(1, 0, 2, 1), (0, 1, -2, 1), (1, 1, 1, 1), (0, 3, 1, 1)]),
        true,
    )
    .unwrap();
    let nf = dulac_map(&eq, 16, TOL).unwrap();
    assert_eq!(nf.residual_norm, 0.0);
    assert!(nf.constraints_hold(0.0));
    assert_eq!(nf.u_formula_discrepancy, 0.0);
    let deq = diagonalize(&eq, TOL).unwrap();
    assert_eq!(nf.separatrix, separatrix_oracle(&deq, 16, TOL).unwrap().s);
}

#[test]
fn majorant_examples() {
    assert!(majorant_sequence(0.0, 1.0, 10).is_zero());
    let bar = majorant_sequence(1.0, 1.0, 6);
    assert!(bar.coeff(2).re >= 0.5);
    assert!(bar.coeff(4).re >= 1.0 / 16.0);
    let bar2 = majorant_sequence(2.0, 1.0, 12);
    let bar1 = majorant_sequence(1.0, 1.0, 12);
    for p in 0..=12 {
        assert!(bar1.coeff(p).re >= 0.0);
        assert!(bar2.coeff(p).re >= bar1.coeff(p).re);
    }
}

#[test]
fn majorant_scaling() {
    // (M/c, cσ) scales s̄_p by c^{p-1}.
    let c = 2.0;
    let base = majorant_sequence(0.7, 1.3, 14);
    let scaled = majorant_sequence(0.7 / c, 1.3 * c, 14);
    for p in 2..=14 {
        let want = base.coeff(p).re * c.powi(p as i32 - 1);
        assert!((scaled.coeff(p).re - want).abs() <= 1e-9 * want.max(1e-300));
    }
}

#[test]
fn radius_bound_examples() {
    let trivial = prepared(8, &[(2, 0, 1, 1)], &[(0, 1, 1, 1)]);
    let rb = radius_lower_bound(&trivial, 8, None, TOL).unwrap();
    assert!(rb.dominated && rb.hypothesis_holds);

    let rb = radius_lower_bound(&x2_plus_y2(8), 30, Some((1.0, 1.0)), TOL).unwrap();
    assert!(rb.dominated && rb.hypothesis_holds);
    assert!(rb.estimate.unwrap() > 0.0);

    // Scaling the coordinates by 1/2 halves the estimate.
    let c = 0.5f64;
    let base = radius_lower_bound(&x2_plus_y2(8), 20, Some((1.0, 1.0)), TOL).unwrap();
    let shrunk = radius_lower_bound(&x2_plus_y2(8), 20, Some((1.0 / c, c)), TOL).unwrap();
    let ratio = shrunk.estimate.unwrap() / base.estimate.unwrap();
    assert!(ratio > (1.0 / c).powf(0.85) && ratio <= 1.0 / c + 1e-12, "{ratio}");

    let series = DiagonalizedEquation::prepared(poly(8, &[(2, 0, 1, 1)]), poly(8, &[(0, 1, 1, 1)]), false, TOL).unwrap();
    assert_eq!(radius_lower_bound(&series, 8, None, TOL), Err(DulacError::RequiresBound));
}

#[test]
fn float_residuals_on_scaled_example() {
    let a = Series2::<Float>::from_terms(
        16,
        [(2, 0, Float::new(0.5, 0.25)), (0, 2, Float::new(-0.3, 0.1)), (1, 1, Float::new(0.2, 0.0))],
    )
    .unwrap();
    let b = Series2::<Float>::from_terms(16, [(0, 1, Float::new(1.0, 0.0)), (1, 1, Float::new(0.0, 0.5))]).unwrap();
    let deq = DiagonalizedEquation::prepared(a, b, true, TOL).unwrap();
    let nf = dulac_map_prepared(&deq, 16, TOL).unwrap();
    assert!(nf.residual_norm <= 1e-8, "{}", nf.residual_norm);
    assert!(nf.constraints_hold(1e-9));
    assert!(nf.u_formula_discrepancy <= 1e-8);
}
