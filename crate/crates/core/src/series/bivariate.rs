use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{
    check_order, product_order, MultiIndex, Series1, SeriesError, Var, ORDER_CAP,
};
use crate::coeff::Coeff;

/// Truncated power series in `x` and `y`, stored sparsely.
///
/// Invariant: every stored index has total degree `<= order` and no stored
/// coefficient is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Series2<C> {
    order: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coeff> Series2<C> {
    /// Builds a series from `(i, j, coefficient)` triples. Repeated indices
    /// are summed; indices above `order` are rejected.
    pub fn from_terms(
        order: usize,
        terms: impl IntoIterator<Item = (usize, usize, C)>,
    ) -> Result<Self, SeriesError> {
        check_order(order)?;
        let mut s = Self::zero(order);
        for (i, j, c) in terms {
            let index = MultiIndex::new(i, j);
            if index.degree() > order {
                return Err(SeriesError::TermAboveOrder { index, order });
            }
            if !c.is_finite() {
                return Err(SeriesError::NonFinite { index });
            }
            s.accumulate(index, c);
        }
        s.strip_zeros();
        Ok(s)
    }

    pub fn zero(order: usize) -> Self {
        Self {
            order: order.min(ORDER_CAP),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::monomial(0, 0, c, order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c·x^i·y^j`, zero if `i + j > order`.
    pub fn monomial(i: usize, j: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if i + j <= s.order && !c.is_zero() {
            s.terms.insert(MultiIndex::new(i, j), c);
        }
        s
    }

    /// The coordinate function `x` or `y`.
    pub fn var(var: Var, order: usize) -> Self {
        match var {
            Var::X => Self::monomial(1, 0, C::one(), order),
            Var::Y => Self::monomial(0, 1, C::one(), order),
        }
    }

    /// Embeds a series in `y` (when `var = Y`) or in `x` (when `var = X`).
    pub fn from_series1(s: &Series1<C>, var: Var) -> Self {
        let mut out = Self::zero(s.order());
        for (k, c) in s.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let index = match var {
                    Var::X => MultiIndex::new(k, 0),
                    Var::Y => MultiIndex::new(0, k),
                };
                out.terms.insert(index, c.clone());
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^i y^j` (zero when absent). Panics above the order.
    pub fn coeff(&self, i: usize, j: usize) -> C {
        assert!(
            i + j <= self.order,
            "coefficient x^{i}y^{j} unknown at order {}",
            self.order
        );
        self.terms
            .get(&MultiIndex::new(i, j))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&C> {
        self.terms.get(&MultiIndex::new(i, j))
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Coeff::is_zero)
    }

    /// Lowest total degree with a nonzero coefficient, or `order + 1`.
    pub fn valuation(&self) -> usize {
        self.terms
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(k, _)| k.degree())
            .unwrap_or(self.order + 1)
    }

    /// Highest total degree with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Highest power of `var` appearing in a nonzero term.
    pub fn max_power(&self, var: Var) -> Option<usize> {
        self.terms
            .keys()
            .map(|k| match var {
                Var::X => k.i,
                Var::Y => k.j,
            })
            .max()
    }

    fn accumulate(&mut self, index: MultiIndex, c: C) {
        match self.terms.get_mut(&index) {
            Some(v) => *v += c,
            None => {
                self.terms.insert(index, c);
            }
        }
    }

    fn strip_zeros(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn jet(&self, n: usize) -> Result<Self, SeriesError> {
        if n > self.order {
            return Err(SeriesError::JetAboveOrder {
                requested: n,
                order: self.order,
            });
        }
        Ok(self.truncated(n))
    }

    fn truncated(&self, n: usize) -> Self {
        Self {
            order: n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= n)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Reinterprets a polynomial at a different order, treating unknown
    /// coefficients as zero. Only valid for series known to be polynomials.
    pub fn extend_polynomial(&self, order: usize) -> Result<Self, SeriesError> {
        check_order(order)?;
        if let Some(d) = self.max_degree() {
            if d > order {
                return Err(SeriesError::JetAboveOrder {
                    requested: order,
                    order: d,
                });
            }
        }
        Ok(Self {
            order,
            terms: self.terms.clone(),
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (*k, a.mul_ref(c)))
                .collect(),
        };
        out.strip_zeros();
        out
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series2<D> {
        let mut out = Series2 {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, f(c))).collect(),
        };
        out.strip_zeros();
        out
    }

    /// Cauchy product truncated to `min(order(f), order(g))`.
    pub fn mul_series(&self, other: &Self) -> Self {
        self.mul_to(other, self.order.min(other.order))
    }

    /// Cauchy product kept to the valuation-aware order, which can exceed
    /// the plain minimum when one factor has positive valuation.
    pub fn mul_tracked(&self, other: &Self) -> Self {
        let order = product_order(self.order, self.valuation(), other.order, other.valuation());
        self.mul_to(other, order)
    }

    /// Cauchy product keeping only degrees `<= order`.
    fn mul_to(&self, other: &Self, order: usize) -> Self {
        let size = MultiIndex::new(0, order).graded_position() + 1;
        let mut dense: Vec<Option<C::Acc>> = vec![None; size];
        for (ka, a) in &self.terms {
            if ka.degree() > order {
                break;
            }
            for (kb, b) in &other.terms {
                if ka.degree() + kb.degree() > order {
                    break;
                }
                let pos = MultiIndex::new(ka.i + kb.i, ka.j + kb.j).graded_position();
                let acc = dense[pos].get_or_insert_with(|| C::acc(&C::zero()));
                C::acc_add_mul(acc, a, b);
            }
        }
        let terms = MultiIndex::up_to(order)
            .zip(dense)
            .filter_map(|(k, c)| c.map(|c| C::acc_value(&c)).filter(|c| !c.is_zero()).map(|c| (k, c)))
            .collect();
        Self { order, terms }
    }

    /// Multiplication by the coordinate `var`; exact, so the order rises by
    /// one (up to the cap).
    pub fn mul_var(&self, var: Var) -> Self {
        let order = (self.order + 1).min(ORDER_CAP);
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let k = match var {
                    Var::X => MultiIndex::new(k.i + 1, k.j),
                    Var::Y => MultiIndex::new(k.i, k.j + 1),
                };
                (k, c.clone())
            })
            .filter(|(k, _)| k.degree() <= order)
            .collect();
        Self { order, terms }
    }

    pub fn pow(&self, n: usize) -> Self {
        if n == 0 {
            return Self::one(self.order);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul_tracked(self);
        }
        acc
    }

    /// Formal partial derivative; the order drops by one.
    pub fn derive(&self, var: Var) -> Result<Self, SeriesError> {
        if self.order == 0 {
            return Err(SeriesError::DeriveOrderZero);
        }
        let mut out = Self::zero(self.order - 1);
        for (k, c) in &self.terms {
            let (e, index) = match var {
                Var::X if k.i > 0 => (k.i, MultiIndex::new(k.i - 1, k.j)),
                Var::Y if k.j > 0 => (k.j, MultiIndex::new(k.i, k.j - 1)),
                _ => continue,
            };
            if index.degree() <= out.order {
                out.terms.insert(index, c.mul_ref(&C::from_int(e as i64)));
            }
        }
        Ok(out)
    }

    /// Replaces `var` by `phi`. `phi` must have a vanishing constant term.
    /// The result is reliable up to `min(order(self), order(phi))` (more
    /// when valuations allow).
    pub fn substitute(&self, var: Var, phi: &Self, tol: f64) -> Result<Self, SeriesError> {
        let c0 = phi.coeff(0, 0);
        if !c0.is_negligible(tol * phi.sup_scale()) {
            return Err(SeriesError::NonZeroConstant {
                value: format!("{c0:?}"),
            });
        }
        let mut phi = phi.clone();
        phi.terms.remove(&MultiIndex::new(0, 0));

        let max_p = self.max_power(var).unwrap_or(0);
        let mut slices: Vec<Self> = (0..=max_p)
            .map(|p| Self::zero(self.order - p))
            .collect();
        for (k, c) in &self.terms {
            let (p, rest) = match var {
                Var::X => (k.i, MultiIndex::new(0, k.j)),
                Var::Y => (k.j, MultiIndex::new(k.i, 0)),
            };
            slices[p].terms.insert(rest, c.clone());
        }

        let mut acc = Self::zero(self.order);
        let mut power = Self::one(ORDER_CAP);
        for (p, slice) in slices.iter().enumerate() {
            if p > 0 {
                power = power.mul_tracked(&phi);
            }
            if slice.terms.is_empty() {
                continue;
            }
            acc = &acc + &power.mul_tracked(slice);
        }
        Ok(acc)
    }

    /// Linear change of variables
    /// `f(m[0][0]·x + m[0][1]·y, m[1][0]·x + m[1][1]·y)`; preserves the order.
    pub fn substitute_linear(&self, m: &[[C; 2]; 2]) -> Self {
        let order = self.order;
        let l1 = Self::from_terms(order, [(1, 0, m[0][0].clone()), (0, 1, m[0][1].clone())])
            .expect("linear form within order");
        let l2 = Self::from_terms(order, [(1, 0, m[1][0].clone()), (0, 1, m[1][1].clone())])
            .expect("linear form within order");
        let max_i = self.max_power(Var::X).unwrap_or(0);
        let max_j = self.max_power(Var::Y).unwrap_or(0);
        let powers = |l: &Self, n: usize| {
            let mut v = vec![Self::one(order)];
            for k in 1..=n {
                let next = v[k - 1].mul_to(l, order);
                v.push(next);
            }
            v
        };
        let p1 = powers(&l1, max_i);
        let p2 = powers(&l2, max_j);
        let mut acc = Self::zero(order);
        for (k, c) in &self.terms {
            let term = p1[k.i].mul_to(&p2[k.j], order).scale(c);
            for (kk, v) in term.terms {
                acc.accumulate(kk, v);
            }
        }
        acc.strip_zeros();
        acc
    }

    /// Exact division by `var`. Terms free of `var` must vanish (exactly,
    /// or below `tol` relative to the largest coefficient).
    pub fn divide_exact(&self, var: Var, tol: f64) -> Result<Self, SeriesError> {
        if self.order == 0 {
            return Err(SeriesError::DivideOrderZero { var });
        }
        let threshold = tol * self.sup_scale();
        let mut out = Self::zero(self.order - 1);
        for (k, c) in &self.terms {
            let e = match var {
                Var::X => k.i,
                Var::Y => k.j,
            };
            if e == 0 {
                if !c.is_negligible(threshold) {
                    return Err(SeriesError::NotDivisible {
                        var,
                        index: *k,
                        value: format!("{:?}", c.to_c64()),
                    });
                }
                continue;
            }
            let index = match var {
                Var::X => MultiIndex::new(k.i - 1, k.j),
                Var::Y => MultiIndex::new(k.i, k.j - 1),
            };
            out.terms.insert(index, c.clone());
        }
        Ok(out)
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, tol: f64) -> Result<Self, SeriesError> {
        Self::one(self.order).divide_by_unit(self, tol)
    }

    /// `q` with `q·unit = self`, by the graded recursion
    /// `q_J = u_0^{-1}(s_J - Σ_{0 < K <= J} u_K q_{J-K})`.
    pub fn divide_by_unit(&self, unit: &Self, tol: f64) -> Result<Self, SeriesError> {
        let u0 = unit.coeff(0, 0);
        if u0.is_negligible(tol) {
            return Err(SeriesError::NotAUnit {
                value: format!("{:?}", u0.to_c64()),
            });
        }
        let inv0 = u0.inv().ok_or_else(|| SeriesError::NotAUnit {
            value: format!("{:?}", u0.to_c64()),
        })?;
        let order = product_order(self.order, self.valuation(), unit.order, 0);
        let size = MultiIndex::new(0, order).graded_position() + 1;
        let mut q: Vec<C> = Vec::with_capacity(size);
        let rest: Vec<(MultiIndex, C)> = unit
            .terms
            .iter()
            .filter(|(k, _)| k.degree() > 0)
            .map(|(k, c)| (*k, -c.clone()))
            .collect();
        for target in MultiIndex::up_to(order) {
            let mut acc = C::acc(&self.coeff(target.i, target.j));
            for (k, c) in &rest {
                if k.degree() > target.degree() {
                    break;
                }
                if k.i <= target.i && k.j <= target.j {
                    let pos = MultiIndex::new(target.i - k.i, target.j - k.j).graded_position();
                    C::acc_add_mul(&mut acc, c, &q[pos]);
                }
            }
            q.push(C::acc_value(&acc).mul_ref(&inv0));
        }
        let terms = MultiIndex::up_to(order)
            .zip(q)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Self { order, terms })
    }

    /// `f(0, y)` when `var = X`, or `f(x, 0)` when `var = Y`, as a series in
    /// the remaining variable.
    pub fn restrict_zero(&self, var: Var) -> Series1<C> {
        let mut coeffs = vec![C::zero(); self.order + 1];
        for (k, c) in &self.terms {
            match var {
                Var::X if k.i == 0 => coeffs[k.j] = c.clone(),
                Var::Y if k.j == 0 => coeffs[k.i] = c.clone(),
                _ => {}
            }
        }
        Series1::from_vec_unchecked(coeffs, self.order)
    }

    /// `f(s(y), y)` as a series in `y`; `s(0)` must vanish.
    pub fn compose_x_with(&self, s: &Series1<C>, tol: f64) -> Result<Series1<C>, SeriesError> {
        if !s.coeff(0).is_negligible(tol) {
            return Err(SeriesError::NonZeroConstant {
                value: format!("{:?}", s.coeff(0)),
            });
        }
        let mut s = s.clone();
        let s0 = s.coeff(0).clone();
        s = &s - &Series1::constant(s0, s.order());
        let max_p = self.max_power(Var::X).unwrap_or(0);
        let mut slices: Vec<Vec<C>> = (0..=max_p)
            .map(|p| vec![C::zero(); self.order - p + 1])
            .collect();
        for (k, c) in &self.terms {
            slices[k.i][k.j] = c.clone();
        }
        let mut acc = Series1::zero(self.order);
        let mut power = Series1::one(ORDER_CAP);
        for (p, slice) in slices.into_iter().enumerate() {
            if p > 0 {
                power = power.mul_tracked(&s);
            }
            let order = self.order - p;
            let slice = Series1::from_vec_unchecked(slice, order);
            if slice.is_zero() {
                continue;
            }
            acc = &acc + &power.mul_tracked(&slice);
        }
        Ok(acc)
    }

    /// `Σ |a_J| / J!` over the stored coefficients.
    pub fn norm_factorial(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c.modulus() / k.factorial())
            .fold(0.0, |acc, v| acc + v)
    }

    /// Largest coefficient modulus.
    pub fn sup_modulus(&self) -> f64 {
        self.terms.values().map(Coeff::modulus).fold(0.0, f64::max)
    }

    pub(crate) fn sup_scale(&self) -> f64 {
        self.sup_modulus().max(1.0)
    }

    pub fn eval_c64(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
            acc + c.to_c64() * x.powu(k.i as u32) * y.powu(k.j as u32)
        })
    }

    /// Coefficientwise comparison up to the smaller order.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = self - other;
        diff.terms.values().all(|c| c.is_negligible(tol))
    }
}

impl<C: Coeff> Add for &Series2<C> {
    type Output = Series2<C>;
    fn add(self, rhs: Self) -> Series2<C> {
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for (k, c) in &rhs.terms {
            if k.degree() <= order {
                out.accumulate(*k, c.clone());
            }
        }
        out.strip_zeros();
        out
    }
}

impl<C: Coeff> Sub for &Series2<C> {
    type Output = Series2<C>;
    fn sub(self, rhs: Self) -> Series2<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Neg for &Series2<C> {
    type Output = Series2<C>;
    fn neg(self) -> Series2<C> {
        Series2 {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Mul for &Series2<C> {
    type Output = Series2<C>;
    fn mul(self, rhs: Self) -> Series2<C> {
        self.mul_series(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Exact, Float};

    fn q(n: i64) -> Exact {
        Exact::from_int(n)
    }

    fn poly(order: usize, t: &[(usize, usize, i64)]) -> Series2<Exact> {
        Series2::from_terms(order, t.iter().map(|&(i, j, c)| (i, j, q(c)))).unwrap()
    }

    #[test]
    fn ring_examples() {
        let a = poly(4, &[(0, 0, 1), (1, 0, 1)]);
        let b = poly(4, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(&a * &b, poly(4, &[(0, 0, 1), (2, 0, -1)]));

        let zero = Series2::<Exact>::zero(3);
        let p = &a * &zero;
        assert!(p.is_zero());
        assert_eq!(p.order(), 3);

        let s = poly(2, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(&s * &s, poly(2, &[(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
    }

    #[test]
    fn jet_examples() {
        let f = poly(3, &[(0, 0, 1), (1, 0, 1), (2, 1, 1)]);
        assert_eq!(f.jet(1).unwrap(), poly(1, &[(0, 0, 1), (1, 0, 1)]));
        assert_eq!(f.jet(3).unwrap(), f);
        assert!(poly(2, &[(2, 0, 1), (0, 2, 1)]).jet(1).unwrap().is_zero());
        assert!(matches!(f.jet(4), Err(SeriesError::JetAboveOrder { .. })));
    }

    #[test]
    fn norm_examples() {
        let xy = poly(2, &[(1, 1, 1)]);
        assert_eq!(xy.norm_factorial(), 1.0);
        let z = poly(2, &[(1, 0, 1)]);
        let z2 = &z * &z;
        assert_eq!(z2.norm_factorial(), 0.5);
        assert!(z2.norm_factorial() <= z.norm_factorial() * z.norm_factorial());
    }

    #[test]
    fn derive_examples() {
        let f = poly(4, &[(2, 1, 1)]);
        assert_eq!(f.derive(Var::X).unwrap(), poly(3, &[(1, 1, 2)]));
        assert!(poly(4, &[(2, 0, 1)]).derive(Var::Y).unwrap().is_zero());
        // y + yR with R = xy
        let g = poly(4, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(g.derive(Var::Y).unwrap(), poly(3, &[(0, 0, 1), (1, 1, 2)]));
        assert!(poly(0, &[]).derive(Var::X).is_err());
    }

    #[test]
    fn substitute_examples() {
        let f = poly(4, &[(2, 0, 1)]);
        let phi = poly(4, &[(1, 0, 1), (0, 2, 1)]);
        assert_eq!(
            f.substitute(Var::X, &phi, 0.0).unwrap(),
            poly(4, &[(2, 0, 1), (1, 2, 2), (0, 4, 1)])
        );
        let id = Series2::var(Var::X, 4);
        let g = poly(4, &[(0, 1, 3), (2, 1, 1), (1, 3, -2)]);
        assert_eq!(g.substitute(Var::X, &id, 0.0).unwrap(), g);

        let h = poly(3, &[(0, 1, 1), (1, 0, 1)]);
        let phi = poly(3, &[(1, 0, 1), (1, 1, 1)]);
        assert_eq!(
            h.substitute(Var::X, &phi, 0.0).unwrap(),
            poly(3, &[(0, 1, 1), (1, 0, 1), (1, 1, 1)])
        );

        let bad = poly(3, &[(0, 0, 1), (1, 0, 1)]);
        assert!(matches!(
            h.substitute(Var::X, &bad, 0.0),
            Err(SeriesError::NonZeroConstant { .. })
        ));
    }

    #[test]
    fn divide_exact_examples() {
        // (x² + 2x·s(y))/x with s = y²
        let f = poly(5, &[(2, 0, 1), (1, 2, 2)]);
        assert_eq!(f.divide_exact(Var::X, 0.0).unwrap(), poly(4, &[(1, 0, 1), (0, 2, 2)]));
        let g = poly(3, &[(0, 2, 1), (1, 1, 1)]);
        assert_eq!(g.divide_exact(Var::Y, 0.0).unwrap(), poly(2, &[(0, 1, 1), (1, 0, 1)]));
        let x = poly(2, &[(1, 0, 1)]);
        match x.divide_exact(Var::Y, 0.0) {
            Err(SeriesError::NotDivisible { index, .. }) => assert_eq!(index, MultiIndex::new(1, 0)),
            other => panic!("expected NotDivisible, got {other:?}"),
        }
    }

    #[test]
    fn divide_by_unit_examples() {
        let f = poly(3, &[(0, 1, 1), (1, 1, 1)]);
        assert_eq!(f.divide_by_unit(&Series2::one(3), 0.0).unwrap(), f);
        let u = poly(3, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(
            Series2::one(3).divide_by_unit(&u, 0.0).unwrap(),
            poly(3, &[(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1)])
        );
        let v = poly(3, &[(0, 0, 1), (1, 0, 1)]);
        let q = f.divide_by_unit(&v, 0.0).unwrap();
        assert_eq!(q.jet(2).unwrap(), poly(2, &[(0, 1, 1)]));
        assert!(matches!(
            f.divide_by_unit(&poly(3, &[(1, 0, 1)]), 0.0),
            Err(SeriesError::NotAUnit { .. })
        ));
    }

    #[test]
    fn linear_substitution_preserves_order() {
        let f = poly(3, &[(2, 0, 1), (0, 1, 1)]);
        let m = [[q(1), q(1)], [q(0), q(2)]];
        // (x + y)² + 2y
        assert_eq!(
            f.substitute_linear(&m),
            poly(3, &[(2, 0, 1), (1, 1, 2), (0, 2, 1), (0, 1, 2)])
        );
    }

    #[test]
    fn compose_along_curve() {
        // A = x² + y², s = y²/2: A(s, y) = y² + y⁴/4
        let a = poly(6, &[(2, 0, 1), (0, 2, 1)]);
        let s = Series1::new(6, vec![q(0), q(0), Exact::from_ratio(1, 2)]).unwrap();
        let r = a.compose_x_with(&s, 0.0).unwrap();
        assert_eq!(r.order(), 6);
        assert_eq!(r.coeff(2), &q(1));
        assert_eq!(r.coeff(4), &Exact::from_ratio(1, 4));
    }

    #[test]
    fn mixed_orders_and_float_backend() {
        let a = Series2::<Float>::from_terms(5, [(0, 0, Float::new(1.0, 0.0))]).unwrap();
        let b = Series2::<Float>::from_terms(3, [(1, 1, Float::new(0.0, 2.0))]).unwrap();
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert!(Series2::<Float>::from_terms(2, [(3, 0, Float::new(1.0, 0.0))]).is_err());
        assert!(Series2::<Float>::from_terms(2, [(1, 0, Float::new(f64::INFINITY, 0.0))]).is_err());
    }
}
