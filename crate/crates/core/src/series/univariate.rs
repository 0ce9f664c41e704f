use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{check_order, factorial, product_order, MultiIndex, SeriesError, ORDER_CAP};
use crate::coeff::Coeff;

/// Truncated power series in one variable, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct Series1<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series1<C> {
    /// Builds a series of the given order; missing trailing coefficients
    /// are zero.
    pub fn new(order: usize, coeffs: Vec<C>) -> Result<Self, SeriesError> {
        check_order(order)?;
        if coeffs.len() > order + 1 {
            return Err(SeriesError::TermAboveOrder {
                index: MultiIndex::new(coeffs.len() - 1, 0),
                order,
            });
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite {
                index: MultiIndex::new(k, 0),
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, C::zero());
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec_unchecked(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        coeffs.truncate(order + 1);
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_vec_unchecked(Vec::new(), order.min(ORDER_CAP))
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::from_vec_unchecked(vec![c], order.min(ORDER_CAP))
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c·z^k`, zero if `k > order`.
    pub fn monomial(k: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= s.order() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> &C {
        assert!(
            k <= self.order(),
            "coefficient z^{k} unknown at order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    /// Lowest power with a nonzero coefficient, or `order + 1` if every
    /// known coefficient vanishes.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    pub fn jet(&self, n: usize) -> Result<Self, SeriesError> {
        if n > self.order() {
            return Err(SeriesError::JetAboveOrder {
                requested: n,
                order: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=n].to_vec(),
        })
    }

    /// Reinterprets a polynomial at a higher order, treating the unknown
    /// coefficients as zero. Only valid when the series is known to be a
    /// polynomial.
    pub fn extend_polynomial(&self, order: usize) -> Result<Self, SeriesError> {
        check_order(order)?;
        Ok(Self::from_vec_unchecked(self.coeffs.clone(), order))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series1<D> {
        Series1 {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Cauchy product truncated to `min(order(f), order(g))`.
    pub fn mul_series(&self, other: &Self) -> Self {
        self.mul_to(other, self.order().min(other.order()))
    }

    /// Cauchy product kept to the valuation-aware order.
    pub fn mul_tracked(&self, other: &Self) -> Self {
        let order = product_order(self.order(), self.valuation(), other.order(), other.valuation());
        self.mul_to(other, order)
    }

    fn mul_to(&self, other: &Self, order: usize) -> Self {
        let mut out = vec![C::acc(&C::zero()); order + 1];
        for (k, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (l, b) in other.coeffs.iter().enumerate().take(order + 1 - k) {
                C::acc_add_mul(&mut out[k + l], a, b);
            }
        }
        Self {
            coeffs: out.iter().map(C::acc_value).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        if n == 0 {
            return Self::one(self.order());
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul_tracked(self);
        }
        acc
    }

    /// Formal derivative; the order drops by one.
    pub fn derive(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::DeriveOrderZero);
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].mul_ref(&C::from_int(k as i64)))
            .collect();
        Ok(Self { coeffs })
    }

    /// Antiderivative with zero constant term; the order rises by one
    /// (up to the cap).
    pub fn integrate(&self) -> Self {
        let order = (self.order() + 1).min(ORDER_CAP);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(C::zero());
        for k in 1..=order {
            coeffs.push(self.coeffs[k - 1].mul_ref(&C::from_ratio(1, k as i64)));
        }
        Self { coeffs }
    }

    /// `e^a` for `a(0) = 0`, from `n·E_n = Σ_{k=1}^{n} k·a_k·E_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpOfNonZeroConstant {
                value: format!("{:?}", self.coeffs[0]),
            });
        }
        let order = self.order();
        let mut e = Vec::with_capacity(order + 1);
        e.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                let ka = self.coeffs[k].mul_ref(&C::from_int(k as i64));
                acc.add_mul(&ka, &e[n - k]);
            }
            e.push(acc.mul_ref(&C::from_ratio(1, n as i64)));
        }
        Ok(Self { coeffs: e })
    }

    /// `e^{∫₀ a} − 1`: the solution `C` of `C' = a·(1 + C)`, `C(0) = 0`.
    pub fn exp_integral_minus_one(&self) -> Self {
        let integral = self.integrate();
        let mut e = integral
            .exp()
            .expect("antiderivative has zero constant term");
        e.coeffs[0] -= C::one();
        e
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, tol: f64) -> Result<Self, SeriesError> {
        Self::one(self.order()).divide_by_unit(self, tol)
    }

    /// `q` with `q·unit = self`, by `q_n = u_0^{-1}(s_n - Σ_{0<k<=n} u_k q_{n-k})`.
    pub fn divide_by_unit(&self, unit: &Self, tol: f64) -> Result<Self, SeriesError> {
        let u0 = &unit.coeffs[0];
        if u0.is_negligible(tol) {
            return Err(SeriesError::NotAUnit {
                value: format!("{u0:?}"),
            });
        }
        let inv0 = u0.inv().ok_or_else(|| SeriesError::NotAUnit {
            value: format!("{u0:?}"),
        })?;
        let order = product_order(self.order(), self.valuation(), unit.order(), 0);
        let mut q: Vec<C> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = C::acc(&self.coeffs[n]);
            for k in 1..=n.min(unit.order()) {
                C::acc_add_mul(&mut acc, &-unit.coeffs[k].clone(), &q[n - k]);
            }
            q.push(C::acc_value(&acc).mul_ref(&inv0));
        }
        Ok(Self { coeffs: q })
    }

    /// Exact division by the variable; the constant term must vanish.
    pub fn divide_by_var(&self, tol: f64) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::DivideOrderZero { var: super::Var::X });
        }
        let c0 = &self.coeffs[0];
        if !c0.is_negligible(tol * self.sup_scale()) {
            return Err(SeriesError::NotDivisible {
                var: super::Var::X,
                index: MultiIndex::new(0, 0),
                value: format!("{c0:?}"),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `Σ |a_j| / j!` over the stored coefficients.
    pub fn norm_factorial(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.modulus() / factorial(j))
            .fold(0.0, |acc, v| acc + v)
    }

    /// `max_j |a_j|` over the stored coefficients.
    pub fn norm_sup(&self) -> f64 {
        self.coeffs.iter().map(Coeff::modulus).fold(0.0, f64::max)
    }

    pub(crate) fn sup_scale(&self) -> f64 {
        self.norm_sup().max(1.0)
    }

    /// Evaluates the stored polynomial at a complex point.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
    }

    /// Coefficientwise comparison up to the smaller order.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible(tol))
    }
}

impl<C: Coeff> Add for &Series1<C> {
    type Output = Series1<C>;
    fn add(self, rhs: Self) -> Series1<C> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
            .collect();
        Series1 { coeffs }
    }
}

impl<C: Coeff> Sub for &Series1<C> {
    type Output = Series1<C>;
    fn sub(self, rhs: Self) -> Series1<C> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
            .collect();
        Series1 { coeffs }
    }
}

impl<C: Coeff> Mul for &Series1<C> {
    type Output = Series1<C>;
    fn mul(self, rhs: Self) -> Series1<C> {
        self.mul_series(rhs)
    }
}

impl<C: Coeff> Neg for &Series1<C> {
    type Output = Series1<C>;
    fn neg(self) -> Series1<C> {
        Series1 {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
