//! Jet matrices of finite families and their rank.

use super::GermError;
use crate::coeff::Coeff;
use crate::series::{MultiIndex, Series1, Series2};

/// Anything with a coefficient vector in a fixed graded monomial basis.
pub trait Jettable<C: Coeff> {
    fn order(&self) -> usize;
    /// Coefficients of all monomials of degree `<= p`, in graded order.
    fn jet_row(&self, p: usize) -> Vec<C>;
}

impl<C: Coeff> Jettable<C> for Series1<C> {
    fn order(&self) -> usize {
        Series1::order(self)
    }
    fn jet_row(&self, p: usize) -> Vec<C> {
        (0..=p).map(|k| self.coeff(k).clone()).collect()
    }
}

impl<C: Coeff> Jettable<C> for Series2<C> {
    fn order(&self) -> usize {
        Series2::order(self)
    }
    fn jet_row(&self, p: usize) -> Vec<C> {
        MultiIndex::up_to(p).map(|k| self.coeff(k.i, k.j)).collect()
    }
}

/// Row `k` holds the `p`-jet of the `k`-th family member.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMatrix<C: Coeff> {
    pub p: usize,
    pub rows: Vec<Vec<C>>,
}

impl<C: Coeff> JetMatrix<C> {
    pub fn new<F: Jettable<C>>(family: &[F], p: usize) -> Result<Self, GermError> {
        let min_order = family
            .iter()
            .map(Jettable::order)
            .min()
            .ok_or(GermError::EmptyFamily)?;
        if p > min_order {
            return Err(GermError::JetAboveOrder { p, min_order });
        }
        Ok(Self {
            p,
            rows: family.iter().map(|f| f.jet_row(p)).collect(),
        })
    }

    pub fn family_size(&self) -> usize {
        self.rows.len()
    }

    /// Rank by Gaussian elimination with partial pivoting. Exact backends
    /// ignore `tol`; floating pivots below `tol` times the largest entry
    /// count as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let mut m = self.rows.clone();
        let cols = m.first().map_or(0, Vec::len);
        let scale = m.iter().flatten().map(Coeff::modulus).fold(0.0, f64::max);
        let threshold = tol * scale.max(f64::MIN_POSITIVE);
        let mut rank = 0;
        for col in 0..cols {
            if rank == m.len() {
                break;
            }
            let pivot = (rank..m.len())
                .filter(|&r| !m[r][col].is_negligible(threshold))
                .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()));
            let Some(pr) = pivot else { continue };
            m.swap(rank, pr);
            let inv = m[rank][col].inv().expect("pivot is nonzero");
            for r in (rank + 1)..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].mul_ref(&inv);
                let (top, bottom) = m.split_at_mut(r);
                for (dst, src) in bottom[0][col..cols].iter_mut().zip(&top[rank][col..cols]) {
                    *dst -= factor.mul_ref(src);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank of the `p`-jets of a family.
pub fn jet_rank<C: Coeff, F: Jettable<C>>(family: &[F], p: usize, tol: f64) -> Result<usize, GermError> {
    Ok(JetMatrix::new(family, p)?.rank(tol))
}

/// Verdict on the linear freedom of a family from its jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Freedom {
    /// The `p`-jets are linearly independent, hence so are the germs.
    Free { p: usize },
    /// No jet up to `max_p` is free; finite data cannot decide further.
    Undetermined { max_p: usize },
}

impl Freedom {
    pub fn is_free(self) -> bool {
        matches!(self, Freedom::Free { .. })
    }
}

/// First `p <= max_p` at which the jets are free.
pub fn freedom_certificate<C: Coeff, F: Jettable<C>>(
    family: &[F],
    max_p: usize,
    tol: f64,
) -> Result<Freedom, GermError> {
    let n = family.len();
    JetMatrix::new(family, max_p)?;
    for p in 0..=max_p {
        if jet_rank(family, p, tol)? == n {
            return Ok(Freedom::Free { p });
        }
    }
    Ok(Freedom::Undetermined { max_p })
}
