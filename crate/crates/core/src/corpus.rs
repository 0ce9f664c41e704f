//! Seeded random generators for equations, series and families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Exact, Float};
use crate::equation::{diagonalize, DiagonalizedEquation, PlanarEquation};
use crate::series::{Series1, Series2};

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Gaussian rational `(a + ib)/8` with `|a|, |b| <= 5`, so `|c| < 1`.
pub fn small_coeff(rng: &mut impl Rng) -> Exact {
    Exact::from_gaussian(rng.random_range(-5..=5), rng.random_range(-5..=5), 8)
}

fn nonzero_small(rng: &mut impl Rng) -> Exact {
    loop {
        let c = small_coeff(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial saddle-node in 𝓔₁ of degree `<= degree`.
///
/// The linear part is a rank-one matrix `u·vᵀ` with `vᵀu ≠ 0`. Candidates
/// are rejected unless the prepared form is well conditioned: nonzero
/// eigenvalue `|μ| >= 1/2`, `1/2 <= |A_20| <= 2` and prepared coefficients
/// of modulus `<= 4`.
pub fn random_e1_equation(rng: &mut impl Rng, degree: usize, order: usize) -> PlanarEquation<Exact> {
    let degree = degree.max(2);
    loop {
        let diagonal = rng.random_bool(0.3);
        let (u, v) = if diagonal {
            ([Exact::from_int(0), Exact::from_int(1)], [Exact::from_int(0), nonzero_small(rng)])
        } else {
            ([small_coeff(rng), small_coeff(rng)], [small_coeff(rng), small_coeff(rng)])
        };
        let mut a = vec![(1, 0, u[0].mul_ref(&v[0])), (0, 1, u[0].mul_ref(&v[1]))];
        let mut b = vec![(1, 0, u[1].mul_ref(&v[0])), (0, 1, u[1].mul_ref(&v[1]))];
        for d in 2..=degree {
            for j in 0..=d {
                if rng.random_bool(0.6) {
                    a.push((d - j, j, small_coeff(rng)));
                }
                if rng.random_bool(0.6) {
                    b.push((d - j, j, small_coeff(rng)));
                }
            }
        }
        let Ok(eq) = PlanarEquation::polynomial(order.max(degree), a, b) else {
            continue;
        };
        let Ok(deq) = diagonalize(&eq, 0.0) else {
            continue;
        };
        if well_conditioned(&deq) {
            return eq;
        }
    }
}

fn well_conditioned(deq: &DiagonalizedEquation<Exact>) -> bool {
    let a20 = deq.a.coeff(2, 0).modulus();
    deq.scale.modulus() <= 2.0
        && (0.5..=2.0).contains(&a20)
        && deq.a.sup_modulus() <= 4.0
        && deq.b.sup_modulus() <= 4.0
}

/// `count` equations from `seed`.
pub fn e1_corpus(seed: u64, count: usize, degree: usize, order: usize) -> Vec<PlanarEquation<Exact>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_e1_equation(&mut r, degree, order)).collect()
}

pub fn to_float(eq: &PlanarEquation<Exact>) -> PlanarEquation<Float> {
    eq.map(Coeff::to_c64)
}

/// Random equation already in the form `(x², y + r(x) + y·R(x, y))`.
pub fn random_dulac_form(rng: &mut impl Rng, degree: usize, order: usize) -> PlanarEquation<Exact> {
    let mut b = vec![(0, 1, Exact::from_int(1))];
    for d in 2..=degree.max(2) {
        for j in 0..=d {
            if rng.random_bool(0.5) {
                b.push((d - j, j, small_coeff(rng)));
            }
        }
    }
    PlanarEquation::polynomial(order.max(degree), [(2, 0, Exact::from_int(1))], b)
        .expect("valid polynomial")
}

/// Random univariate series of the given order with coefficients in the
/// box `[-scale, scale]²`.
pub fn random_series1(rng: &mut impl Rng, order: usize, scale: f64) -> Series1<Float> {
    let coeffs = (0..=order)
        .map(|_| Float::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale)))
        .collect();
    Series1::new(order, coeffs).expect("finite coefficients")
}

/// Random bivariate series with about `density` of the monomials present.
pub fn random_series2(rng: &mut impl Rng, order: usize, density: f64) -> Series2<Exact> {
    let mut terms = Vec::new();
    for d in 0..=order {
        for j in 0..=d {
            if rng.random_bool(density) {
                terms.push((d - j, j, small_coeff(rng)));
            }
        }
    }
    Series2::from_terms(order, terms).expect("within order")
}

/// A family of `n <= 5` polynomials of degree `<= 8` in one variable.
/// Sometimes a member is a combination of the others, so both verdicts
/// occur.
pub fn random_family(rng: &mut impl Rng, order: usize) -> Vec<Series1<Exact>> {
    let n = rng.random_range(1..=5);
    let degree = rng.random_range(0..=8).min(order);
    let sparse = |rng: &mut dyn rand::RngCore| {
        let coeffs: Vec<Exact> = (0..=order)
            .map(|k| {
                if k <= degree && rng.random_bool(0.5) {
                    Exact::from_int(rng.random_range(-3..=3))
                } else {
                    Exact::from_int(0)
                }
            })
            .collect();
        Series1::new(order, coeffs).expect("within order")
    };
    let mut fam: Vec<Series1<Exact>> = (0..n).map(|_| sparse(rng)).collect();
    if n >= 2 && rng.random_bool(0.4) {
        let mut combo = Series1::zero(order);
        for f in &fam[..n - 1] {
            let k = Exact::from_int(rng.random_range(-2..=2));
            combo = &combo + &f.scale(&k);
        }
        fam[n - 1] = combo;
    }
    fam
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::stratum_e1_test;

    #[test]
    fn corpus_is_reproducible_and_in_class() {
        let a = e1_corpus(7, 5, 4, 16);
        let b = e1_corpus(7, 5, 4, 16);
        assert_eq!(a, b);
        for eq in &a {
            assert_eq!(eq.order(), 16);
            assert!(eq.a().max_degree().unwrap() <= 4);
            let all = eq.a().terms().chain(eq.b().terms());
            for (_, c) in all {
                assert!(c.modulus() < 1.0);
            }
            let deq = diagonalize(eq, 0.0).unwrap();
            assert!(stratum_e1_test(&deq, 0.0).in_e1);
        }
        assert_ne!(e1_corpus(8, 5, 4, 16), a);
    }

    #[test]
    fn dulac_forms_have_the_shape() {
        let mut r = rng(3);
        for _ in 0..10 {
            let eq = random_dulac_form(&mut r, 4, 12);
            assert_eq!(eq.a().num_terms(), 1);
            assert_eq!(eq.b().coeff(0, 1), Exact::from_int(1));
            assert!(eq.b().coeff(1, 0).is_zero());
        }
    }
}
