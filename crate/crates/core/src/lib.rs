//! Truncated power series, classification of planar singular differential
//! equations `A dy = B dx`, and the canonical Dulac prenormalization of
//! saddle-nodes to `x² dy = (y + r(x) + y·R(x, y)) dx`.
//!
//! Every computation is generic over the coefficient backend: [`Float`] for
//! speed and [`Exact`] (complex rationals) for residual-zero verification.

pub mod coeff;
pub mod corpus;
pub mod dulac;
pub mod equation;
pub mod germ_space;
pub mod par;
pub mod series;

pub use coeff::{Coeff, Exact, Float};
pub use series::{MultiIndex, Series1, Series2, SeriesError, Var, ORDER_CAP};

/// Default relative zero tolerance for floating predicates.
pub const DEFAULT_TOL: f64 = 1e-9;
