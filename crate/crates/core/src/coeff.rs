//! Coefficient fields for truncated series.
//!
//! Two backends are provided: [`Float`] (double-precision complex numbers)
//! and [`Exact`] (complex numbers with arbitrary-precision rational parts).
//! Everything downstream is generic over [`Coeff`], so the exact backend can
//! serve as an oracle for the floating one on the same inputs.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

/// Double-precision complex coefficient.
pub type Float = Complex64;

/// Exact complex rational coefficient.
pub type Exact = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffParseError {
    #[error("malformed coefficient `{0}`: expected a number or a rational string \"p/q\"")]
    Malformed(String),
    #[error("non-finite coefficient")]
    NonFinite,
}

/// A coefficient field (always a subfield of the complex numbers).
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    /// `true` for backends with exact equality.
    const EXACT: bool;
    /// Short backend name used in reports.
    const BACKEND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    /// The rational number `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    /// Gaussian rational `(re_num + i·im_num) / den`.
    fn from_gaussian(re_num: i64, im_num: i64, den: i64) -> Self;
    /// Converts a floating value; exact backends go through the shortest
    /// decimal representation, so `0.1` becomes `1/10`.
    fn from_c64(z: Complex64) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Zero test used by divisibility, unit and stratum predicates. Exact
    /// backends ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= tol
        }
    }
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    fn inv(&self) -> Option<Self>;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);

    /// Running sum of products. The floating accumulator carries the
    /// rounding error of every step, so a dot product is as accurate as
    /// if computed in twice the working precision.
    type Acc: Clone + Debug + Send + Sync;
    fn acc(start: &Self) -> Self::Acc;
    /// `acc += a * b`
    fn acc_add_mul(acc: &mut Self::Acc, a: &Self, b: &Self);
    fn acc_value(acc: &Self::Acc) -> Self;
    fn is_finite(&self) -> bool;
    /// `|self| <= base^exp`, decided exactly on the exact backend.
    fn modulus_at_most_power(&self, base: u64, exp: u32) -> bool;

    fn to_json_parts(&self) -> [Value; 2];
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, CoeffParseError>;
}

impl Coeff for Float {
    const EXACT: bool = false;
    const BACKEND: &'static str = "float";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_gaussian(re_num: i64, im_num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(re_num as f64 / den as f64, im_num as f64 / den as f64)
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        (z.re.is_finite() && z.im.is_finite()).then_some(z)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    type Acc = Compensated;
    fn acc(start: &Self) -> Compensated {
        Compensated {
            re: CompensatedSum::new(start.re),
            im: CompensatedSum::new(start.im),
        }
    }
    fn acc_add_mul(acc: &mut Compensated, a: &Self, b: &Self) {
        acc.re.add_product(a.re, b.re);
        acc.re.add_product(-a.im, b.im);
        acc.im.add_product(a.re, b.im);
        acc.im.add_product(a.im, b.re);
    }
    fn acc_value(acc: &Compensated) -> Self {
        Complex64::new(acc.re.value(), acc.im.value())
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn modulus_at_most_power(&self, base: u64, exp: u32) -> bool {
        let bound = (base as f64).powi(exp as i32);
        self.norm() <= bound * (1.0 + 4.0 * f64::EPSILON)
    }
    fn to_json_parts(&self) -> [Value; 2] {
        [float_value(self.re), float_value(self.im)]
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, CoeffParseError> {
        let z = Complex64::new(json_to_f64(re)?, json_to_f64(im)?);
        if Coeff::is_finite(&z) {
            Ok(z)
        } else {
            Err(CoeffParseError::NonFinite)
        }
    }
}

impl Coeff for Exact {
    const EXACT: bool = true;
    const BACKEND: &'static str = "exact";

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(ratio(num, den), BigRational::zero())
    }
    fn from_gaussian(re_num: i64, im_num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(ratio(re_num, den), ratio(im_num, den))
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(Complex::new(f64_to_rational(z.re)?, f64_to_rational(z.im)?))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &n, -(&self.im / &n)))
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if Coeff::is_zero(a) || Coeff::is_zero(b) {
            return;
        }
        *self += a * b;
    }

    type Acc = Exact;
    fn acc(start: &Self) -> Exact {
        start.clone()
    }
    fn acc_add_mul(acc: &mut Exact, a: &Self, b: &Self) {
        acc.add_mul(a, b);
    }
    fn acc_value(acc: &Exact) -> Self {
        acc.clone()
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn modulus_at_most_power(&self, base: u64, exp: u32) -> bool {
        let sq = &self.re * &self.re + &self.im * &self.im;
        let bound = num_traits::pow(BigInt::from(base), 2 * exp as usize);
        sq <= BigRational::from_integer(bound)
    }
    fn to_json_parts(&self) -> [Value; 2] {
        [
            Value::String(self.re.to_string()),
            Value::String(self.im.to_string()),
        ]
    }
    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, CoeffParseError> {
        Ok(Complex::new(json_to_rational(re)?, json_to_rational(im)?))
    }
}

/// Real sum with a running error term (error-free transformations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn new(start: f64) -> Self {
        Self { sum: start, err: 0.0 }
    }

    /// `self += x·y`.
    pub fn add_product(&mut self, x: f64, y: f64) {
        let p = x * y;
        let e = x.mul_add(y, -p);
        let s = self.sum + p;
        let z = s - self.sum;
        let t = (self.sum - (s - z)) + (p - z);
        self.sum = s;
        self.err += t + e;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

/// Complex [`CompensatedSum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compensated {
    re: CompensatedSum,
    im: CompensatedSum,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn float_value(x: f64) -> Value {
    // -0.0 and 0.0 print differently; normalize so output is deterministic.
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn json_to_f64(v: &Value) -> Result<f64, CoeffParseError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| CoeffParseError::Malformed(n.to_string())),
        Value::String(s) => {
            let q = parse_rational(s).ok_or_else(|| CoeffParseError::Malformed(s.clone()))?;
            q.to_f64().ok_or(CoeffParseError::NonFinite)
        }
        other => Err(CoeffParseError::Malformed(other.to_string())),
    }
}

fn json_to_rational(v: &Value) -> Result<BigRational, CoeffParseError> {
    match v {
        Value::Number(n) => {
            parse_rational(&n.to_string()).ok_or_else(|| CoeffParseError::Malformed(n.to_string()))
        }
        Value::String(s) => parse_rational(s).ok_or_else(|| CoeffParseError::Malformed(s.clone())),
        other => Err(CoeffParseError::Malformed(other.to_string())),
    }
}

fn f64_to_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    // Debug formatting of f64 is the shortest round-trip representation.
    parse_rational(&format!("{x:?}"))
}

/// Parses `"p/q"`, an integer, or a decimal literal with optional exponent
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut q = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("-6/8"), Some(ratio(-3, 4)));
        assert_eq!(parse_rational("0.125"), Some(ratio(1, 8)));
        assert_eq!(parse_rational("-1.5e2"), Some(ratio(-150, 1)));
        assert_eq!(parse_rational("2.5E-1"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("7"), Some(ratio(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn float_to_exact_uses_shortest_decimal() {
        let z = Exact::from_c64(Complex64::new(0.1, -2.0)).unwrap();
        assert_eq!(z, Exact::from_gaussian(1, -20, 10));
        assert!(Exact::from_c64(Complex64::new(f64::NAN, 0.0)).is_none());
    }

    #[test]
    fn exact_inverse() {
        let z = Exact::from_gaussian(3, 4, 1);
        let w = Coeff::inv(&z).unwrap();
        assert_eq!(z * w, <Exact as Coeff>::one());
        assert!(Coeff::inv(&<Exact as Coeff>::zero()).is_none());
    }

    #[test]
    fn power_bound_is_exact() {
        let z = Exact::from_int(8);
        assert!(z.modulus_at_most_power(2, 3));
        assert!(!z.modulus_at_most_power(2, 2));
        assert!(Float::new(8.0, 0.0).modulus_at_most_power(2, 3));
    }

    #[test]
    fn json_parts_round_trip() {
        let z = Exact::from_gaussian(-1, 3, 7);
        let [re, im] = z.to_json_parts();
        assert_eq!(Exact::from_json_parts(&re, &im).unwrap(), z);
        let f = Float::new(0.25, -1.0);
        let [re, im] = f.to_json_parts();
        assert_eq!(Float::from_json_parts(&re, &im).unwrap(), f);
        assert!(Float::from_json_parts(&Value::Bool(true), &Value::from(0)).is_err());
    }
}
