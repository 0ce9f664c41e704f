//! Truncated power series in one and two variables.
//!
//! A series of order `N` stores the coefficients of every monomial of total
//! degree `<= N`; everything above is unknown, never implicitly zero.
//! Binary operations report the largest order at which their result is
//! reliable. For products this uses valuations: if `f` is known to order
//! `n_f` and has valuation `v_f` (and likewise for `g`), then `f·g` is known
//! to order `min(n_f + v_g, n_g + v_f)`. This equals `min(n_f, n_g)` as soon
//! as one factor is a unit.

mod bivariate;
mod json;
mod univariate;

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

pub use bivariate::Series2;
pub use json::{is_univariate, SeriesJsonError};
pub use univariate::Series1;

/// Largest supported truncation order.
pub const ORDER_CAP: usize = 64;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
///
/// Ordered by total degree first, then by decreasing power of `x`
/// (`1, x, y, x², xy, y², …`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub i: usize,
    pub j: usize,
}

impl MultiIndex {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub const fn degree(&self) -> usize {
        self.i + self.j
    }

    /// `i!·j!` as a float (exact up to the order cap within `f64` range).
    pub fn factorial(&self) -> f64 {
        factorial(self.i) * factorial(self.j)
    }

    /// Position of this index in the graded order.
    pub const fn graded_position(&self) -> usize {
        let d = self.degree();
        d * (d + 1) / 2 + self.j
    }

    /// All indices of total degree `<= order`, in graded order.
    pub fn up_to(order: usize) -> impl Iterator<Item = MultiIndex> {
        (0..=order).flat_map(|d| (0..=d).map(move |j| MultiIndex::new(d - j, j)))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}y^{}", self.i, self.j)
    }
}

/// Variable selector for bivariate operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// `n!` for `n <= ORDER_CAP`.
pub fn factorial(n: usize) -> f64 {
    static TABLE: OnceLock<[f64; ORDER_CAP + 1]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [1.0; ORDER_CAP + 1];
        for k in 1..=ORDER_CAP {
            t[k] = t[k - 1] * k as f64;
        }
        t
    });
    assert!(n <= ORDER_CAP, "factorial({n}) beyond the order cap");
    table[n]
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("order {order} exceeds the cap {ORDER_CAP}")]
    OrderTooLarge { order: usize },
    #[error("term {index} has degree above the series order {order}")]
    TermAboveOrder { index: MultiIndex, order: usize },
    #[error("non-finite coefficient at {index}")]
    NonFinite { index: MultiIndex },
    #[error("jet of order {requested} requested from a series of order {order}")]
    JetAboveOrder { requested: usize, order: usize },
    #[error("cannot differentiate a series of order 0")]
    DeriveOrderZero,
    #[error("cannot divide a series of order 0 by {var}")]
    DivideOrderZero { var: Var },
    #[error("not divisible by {var}: coefficient of {index} is {value}")]
    NotDivisible {
        var: Var,
        index: MultiIndex,
        value: String,
    },
    #[error("not a unit: constant coefficient {value} is zero")]
    NotAUnit { value: String },
    #[error("substituted series has nonzero constant term {value}")]
    NonZeroConstant { value: String },
    #[error("operation needs a zero constant term, found {value}")]
    ExpOfNonZeroConstant { value: String },
}

pub(crate) fn check_order(order: usize) -> Result<usize, SeriesError> {
    if order > ORDER_CAP {
        Err(SeriesError::OrderTooLarge { order })
    } else {
        Ok(order)
    }
}

/// Order of a product given both orders and valuations.
pub(crate) fn product_order(
    order_f: usize,
    val_f: usize,
    order_g: usize,
    val_g: usize,
) -> usize {
    (order_f + val_g).min(order_g + val_f).min(ORDER_CAP)
}
