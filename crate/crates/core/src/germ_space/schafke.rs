//! Membership in the covering sets `M_N = {Σ a_j z^j : |a_j| <= N^j}`.

use crate::coeff::Coeff;
use crate::series::Series1;

#[derive(Debug, Clone, PartialEq)]
pub struct SchafkeCertificate {
    /// Smallest `N >= 1` with `|a_j| <= N^j` for every stored `j >= 1`.
    pub min_n: u64,
    pub order: usize,
    /// `|a_0| > 1`: no `M_N` contains the series.
    pub constant_violation: bool,
    pub a0_modulus: f64,
}

impl SchafkeCertificate {
    /// Whether the series belongs to `M_{min_n}`.
    pub fn is_member(&self) -> bool {
        !self.constant_violation
    }
}

fn coefficients_within<C: Coeff>(f: &Series1<C>, n: u64) -> bool {
    f.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .all(|(j, c)| c.modulus_at_most_power(n, j as u32))
}

/// `f ∈ M_n` for the stored truncation.
pub fn in_m_n<C: Coeff>(f: &Series1<C>, n: u64) -> bool {
    f.coeff(0).modulus_at_most_power(1, 0) && coefficients_within(f, n)
}

pub fn schafke_min_n<C: Coeff>(f: &Series1<C>) -> SchafkeCertificate {
    let estimate = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.modulus().powf(1.0 / j as f64))
        .fold(0.0, f64::max);
    let mut n = (estimate.floor() as u64).saturating_sub(1).max(1);
    while !coefficients_within(f, n) {
        n += 1;
    }
    SchafkeCertificate {
        min_n: n,
        order: f.order(),
        constant_violation: !f.coeff(0).modulus_at_most_power(1, 0),
        a0_modulus: f.coeff(0).modulus(),
    }
}
