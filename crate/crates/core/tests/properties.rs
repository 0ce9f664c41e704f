//! Property-based invariants of the series algebra, the preparation step
//! and the germ-space diagnostics.

use dulac_core::corpus::{self, random_dulac_form, random_e1_equation};
use dulac_core::dulac::{
    dulac_map, majorant_sequence, separatrix_oracle, separatrix_recurrence, separatrix_residual,
};
use dulac_core::equation::diagonalize;
use dulac_core::germ_space::{freedom_certificate, in_m_n, jet_rank, schafke_min_n, JetMatrix};
use dulac_core::{Coeff, Exact, Float, Series1, Series2, Var};
use proptest::prelude::*;

fn arb_exact2(order: usize) -> impl Strategy<Value = Series2<Exact>> {
    prop::collection::vec((0..=order, 0..=order, -4i64..=4, -4i64..=4), 0..10).prop_map(move |raw| {
        let terms = raw
            .into_iter()
            .filter(|&(i, j, _, _)| i + j <= order)
            .map(|(i, j, re, im)| (i, j, Exact::from_gaussian(re, im, 3)));
        Series2::from_terms(order, terms).unwrap()
    })
}

fn arb_float1(max_order: usize) -> impl Strategy<Value = Series1<Float>> {
    (0..=max_order).prop_flat_map(|order| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), order + 1)
            .prop_map(move |c| Series1::new(order, c.into_iter().map(|(re, im)| Float::new(re, im)).collect()).unwrap())
    })
}

fn arb_exact1(order: usize) -> impl Strategy<Value = Series1<Exact>> {
    prop::collection::vec(-3i64..=3, order + 1)
        .prop_map(move |c| Series1::new(order, c.into_iter().map(Exact::from_int).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_hold_exactly(f in arb_exact2(5), g in arb_exact2(5), h in arb_exact2(5)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f - &g) + &g, f.clone());
        prop_assert_eq!(&f * &Series2::one(5), f.clone());
    }

    #[test]
    fn mixed_orders_truncate_to_the_minimum(f in arb_exact2(6), g in arb_exact2(4)) {
        let p = &f * &g;
        prop_assert_eq!(p.order(), 4);
        prop_assert_eq!(p, &f.jet(4).unwrap() * &g);
        let t = f.mul_tracked(&g);
        prop_assert_eq!(t.jet(4).unwrap(), &f.jet(4).unwrap() * &g);
    }

    #[test]
    fn norm_inequalities(f in arb_float1(32), g in arb_float1(32), n in 0usize..32) {
        let slack = 1e-12;
        prop_assert!((&f + &g).norm_factorial() <= f.norm_factorial() + g.norm_factorial() + slack);
        prop_assert!((&f * &g).norm_factorial() <= f.norm_factorial() * g.norm_factorial() + slack);
        let jet = f.jet(n.min(f.order())).unwrap();
        prop_assert!(jet.norm_factorial() <= f.norm_factorial() + slack);
        prop_assert!(f.norm_factorial() <= std::f64::consts::E * f.norm_sup() + slack);
    }

    #[test]
    fn series_json_round_trips(f in arb_exact2(6), g in arb_exact1(6)) {
        prop_assert_eq!(Series2::<Exact>::from_json(&f.to_json()).unwrap(), f);
        prop_assert_eq!(Series1::<Exact>::from_json(&g.to_json(Var::Y)).unwrap(), g);
    }

    #[test]
    fn derivative_undoes_integral(g in arb_exact1(8)) {
        let back = g.integrate().derive().unwrap();
        prop_assert_eq!(back.jet(g.order() - 1).unwrap(), g.jet(g.order() - 1).unwrap());
    }

    #[test]
    fn jet_rank_is_monotone_and_bounded(
        fam in prop::collection::vec(arb_exact1(8), 1..=5),
        p in 0usize..8,
    ) {
        let r0 = jet_rank(&fam, p, 0.0).unwrap();
        let r1 = jet_rank(&fam, p + 1, 0.0).unwrap();
        prop_assert!(r0 <= r1);
        prop_assert!(r1 <= fam.len().min(p + 2));
        let full = JetMatrix::new(&fam, 8).unwrap().rank(0.0);
        if freedom_certificate(&fam, 8, 0.0).unwrap().is_free() {
            prop_assert_eq!(full, fam.len());
        } else {
            prop_assert!(full < fam.len());
        }
    }

    #[test]
    fn schafke_minimum_is_sharp_and_upward_closed(f in arb_exact1(10), extra in 0u64..4) {
        let mut c = f.coeffs().to_vec();
        c[0] = Exact::from_gaussian(c[0].to_c64().re.signum() as i64, 0, 2);
        let f = Series1::new(10, c).unwrap();
        let cert = schafke_min_n(&f);
        prop_assert!(cert.is_member());
        prop_assert!(in_m_n(&f, cert.min_n));
        prop_assert!(in_m_n(&f, cert.min_n + extra));
        prop_assert!(cert.min_n == 1 || !in_m_n(&f, cert.min_n - 1));
    }

    #[test]
    fn majorant_rescales(m in 0.1f64..3.0, sigma in 0.1f64..2.0, c in 0.5f64..2.0) {
        let base = majorant_sequence(m, sigma, 12);
        let scaled = majorant_sequence(m / c, c * sigma, 12);
        for p in 1..=12 {
            let want = base.coeff(p).re * c.powi(p as i32 - 1);
            prop_assert!((scaled.coeff(p).re - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn diagonalization_preserves_the_field(seed in any::<u64>()) {
        let eq = random_e1_equation(&mut corpus::rng(seed), 3, 6);
        let deq = diagonalize(&eq, 0.0).unwrap();
        let p = &deq.change;
        let a_old = eq.a().substitute_linear(p).scale(&deq.scale);
        let b_old = eq.b().substitute_linear(p).scale(&deq.scale);
        let a_new = &deq.a.scale(&p[0][0]) + &deq.b.scale(&p[0][1]);
        let b_new = &deq.a.scale(&p[1][0]) + &deq.b.scale(&p[1][1]);
        prop_assert_eq!(a_old, a_new);
        prop_assert_eq!(b_old, b_new);
        prop_assert_eq!(deq.a.coeff(1, 0), Exact::from_int(0));
        prop_assert_eq!(deq.b.coeff(0, 1), Exact::from_int(1));
    }

    #[test]
    fn recurrence_matches_oracle_and_solves(seed in any::<u64>()) {
        let eq = random_e1_equation(&mut corpus::rng(seed), 3, 8);
        let deq = diagonalize(&eq, 0.0).unwrap();
        let rec = separatrix_recurrence(&deq, 8, 0.0).unwrap();
        let oracle = separatrix_oracle(&deq, 8, 0.0).unwrap();
        prop_assert_eq!(&rec.s, &oracle.s);
        prop_assert!(separatrix_residual(&deq.a, &deq.b, &rec.s, 0.0).unwrap().is_zero());
    }

    #[test]
    fn prepared_forms_are_fixed(seed in any::<u64>()) {
        let eq = random_dulac_form(&mut corpus::rng(seed), 4, 8);
        let nf = dulac_map(&eq, 8, 0.0).unwrap();
        let r = eq.b().restrict_zero(Var::Y).jet(nf.r.order()).unwrap();
        prop_assert_eq!(&nf.r, &r);
        prop_assert_eq!(&nf.b_d, &eq.b().jet(nf.b_d.order()).unwrap());
        prop_assert!(nf.constraints_hold(0.0));
        prop_assert_eq!(nf.residual_norm, 0.0);
    }
}
