//! The separatrix `x = s(y)`, by recurrence and by brute-force matching.

use super::DulacError;
use crate::coeff::Coeff;
use crate::equation::DiagonalizedEquation;
use crate::series::{Series1, Series2};

/// Invariant curve `x = s(y)` with `s(0) = s'(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separatrix<C: Coeff> {
    pub s: Series1<C>,
}

impl<C: Coeff> Separatrix<C> {
    pub fn order(&self) -> usize {
        self.s.order()
    }
}

/// Tables kept by the coefficient recurrence.
#[derive(Debug, Clone)]
pub struct SeparatrixRecurrenceState<C: Coeff> {
    pub s: Vec<C>,
    /// `table[n][j]`: coefficient of `y^j` in `s(y)^n`.
    pub table: Vec<Vec<C>>,
    /// `wa[p]`: coefficient of `y^p` in `A(s(y), y)`.
    pub wa: Vec<C>,
    /// `wb[m]`: coefficient of `y^m` in `B̂(s(y), y)` with `B̂ = B - y`.
    pub wb: Vec<C>,
    /// Largest index `q` of `s_q` read while computing `s_p`.
    pub max_read: Vec<Option<usize>>,
}

/// Sign of the `B̂` sum in the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BSign {
    /// The actual separatrix: the `B̂` sum moves to the left-hand side.
    Minus,
    /// The majorant: every contribution counted positively.
    Plus,
}

/// Runs `p·s_p = W(A)_p ∓ Σ_{m=2}^{p-1} (p+1-m)·W(B̂)_m·s_{p+1-m}` for
/// `p = 2..=n`. `a_terms` must omit the indices `(0,0)`, `(1,0)`, `(0,1)`;
/// `bhat_terms` must omit `(0,0)` and `(0,1)`.
pub(crate) fn run_recurrence<C: Coeff>(
    a_terms: &[(usize, usize, C)],
    bhat_terms: &[(usize, usize, C)],
    n: usize,
    sign: BSign,
) -> SeparatrixRecurrenceState<C> {
    debug_assert!(a_terms.iter().all(|&(i, j, _)| i + j >= 2));
    debug_assert!(bhat_terms.iter().all(|&(i, j, _)| (i, j) != (0, 0) && (i, j) != (0, 1)));
    let max_pow = n / 2;
    let mut st = SeparatrixRecurrenceState {
        s: vec![C::zero(); n + 1],
        table: vec![vec![C::zero(); n + 1]; max_pow + 1],
        wa: vec![C::zero(); n + 1],
        wb: vec![C::zero(); n + 1],
        max_read: vec![None; n + 1],
    };
    st.table[0][0] = C::one();
    let b10 = bhat_terms
        .iter()
        .find(|(i, j, _)| (*i, *j) == (1, 0))
        .map(|(_, _, c)| c.clone());

    for p in 2..=n {
        let mut read: Option<usize> = None;
        let mut note = |q: usize| read = Some(read.map_or(q, |r: usize| r.max(q)));

        // Powers s^k at degree p for k >= 2 only involve s_q with q <= p - 2.
        for k in 2..=max_pow {
            if 2 * k > p {
                break;
            }
            let mut acc = C::zero();
            for q in 2..=(p - 2 * (k - 1)) {
                acc.add_mul(&st.s[q], &st.table[k - 1][p - q]);
                note(q);
            }
            st.table[k][p] = acc;
        }

        // W(A)_p and W(B̂)_p from the current tables.
        let mut wa = C::zero();
        for (i, j, c) in a_terms {
            if *j > p {
                continue;
            }
            let deg = p - j;
            if let Some(v) = power_coeff(&st, *i, deg, p, &mut note) {
                wa.add_mul(c, &v);
            }
        }
        let mut wb = C::zero();
        for (i, j, c) in bhat_terms {
            // b̂_10·s_p is added once s_p is known; W(B̂)_p is first read at p + 1.
            if *j > p || (*i, *j) == (1, 0) {
                continue;
            }
            let deg = p - j;
            if let Some(v) = power_coeff(&st, *i, deg, p, &mut note) {
                wb.add_mul(c, &v);
            }
        }
        st.wa[p] = wa.clone();
        st.wb[p] = wb;

        let mut sum = C::zero();
        for m in 2..p {
            let q = p + 1 - m;
            if st.wb[m].is_zero() || st.s[q].is_zero() {
                note(q);
                continue;
            }
            let w = st.wb[m].mul_ref(&C::from_int(q as i64));
            sum.add_mul(&w, &st.s[q]);
            note(q);
        }
        let rhs = match sign {
            BSign::Minus => wa - sum,
            BSign::Plus => wa + sum,
        };
        st.s[p] = rhs.mul_ref(&C::from_ratio(1, p as i64));
        st.table[1][p] = st.s[p].clone();
        if let Some(b10) = &b10 {
            let sp = st.s[p].clone();
            st.wb[p].add_mul(b10, &sp);
        }
        st.max_read[p] = read;
        if let Some(q) = read {
            assert!(q < p, "recurrence for s_{p} read s_{q}");
        }
    }

    st
}

/// Coefficient of `y^deg` in `s^i`, recording the indices of `s` it reads.
fn power_coeff<C: Coeff>(
    st: &SeparatrixRecurrenceState<C>,
    i: usize,
    deg: usize,
    p: usize,
    note: &mut impl FnMut(usize),
) -> Option<C> {
    match i {
        0 => (deg == 0).then(C::one),
        1 => {
            if deg < 2 {
                return None;
            }
            note(deg);
            Some(st.s[deg].clone())
        }
        _ => {
            if deg < 2 * i || i >= st.table.len() {
                return None;
            }
            debug_assert!(deg <= p);
            note(deg - 2 * (i - 1));
            Some(st.table[i][deg].clone())
        }
    }
}

fn check_request<C: Coeff>(deq: &DiagonalizedEquation<C>, n: usize, tol: f64) -> Result<(), DulacError> {
    deq.check_prepared(tol)?;
    if n > deq.order() {
        return Err(DulacError::OrderExceeded {
            requested: n,
            available: deq.order(),
        });
    }
    Ok(())
}

/// Separatrix from the coefficient recurrence.
pub fn separatrix_recurrence<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    n: usize,
    tol: f64,
) -> Result<Separatrix<C>, DulacError> {
    Ok(Separatrix {
        s: Series1::new(n, recurrence_state(deq, n, tol)?.s)?,
    })
}

/// The full recurrence state, for inspection.
pub fn recurrence_state<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    n: usize,
    tol: f64,
) -> Result<SeparatrixRecurrenceState<C>, DulacError> {
    check_request(deq, n, tol)?;
    let a_terms: Vec<_> = deq
        .a
        .terms()
        .filter(|(k, _)| k.degree() >= 2 && k.degree() <= n)
        .map(|(k, c)| (k.i, k.j, c.clone()))
        .collect();
    let bhat_terms: Vec<_> = deq
        .b
        .terms()
        .filter(|(k, _)| k.degree() >= 2 && k.degree() <= n)
        .map(|(k, c)| (k.i, k.j, c.clone()))
        .collect();
    Ok(run_recurrence(&a_terms, &bhat_terms, n, BSign::Minus))
}

/// `A(s(y), y) - B(s(y), y)·s'(y)` at order `n`.
pub fn separatrix_residual<C: Coeff>(
    a: &Series2<C>,
    b: &Series2<C>,
    s: &Series1<C>,
    tol: f64,
) -> Result<Series1<C>, DulacError> {
    let lhs = a.compose_x_with(s, tol)?;
    let bs = b.compose_x_with(s, tol)?;
    let rhs = if s.order() == 0 {
        Series1::zero(bs.order())
    } else {
        bs.mul_tracked(&s.derive()?)
    };
    Ok(&lhs - &rhs)
}

/// Separatrix by generic coefficient matching: each `s_p` is the root of
/// the affine equation in `s_p` given by the `y^p` coefficient of the
/// residual.
pub fn separatrix_oracle<C: Coeff>(
    deq: &DiagonalizedEquation<C>,
    n: usize,
    tol: f64,
) -> Result<Separatrix<C>, DulacError> {
    check_request(deq, n, tol)?;
    let a = deq.a.jet(n)?;
    let b = deq.b.jet(n)?;
    let mut coeffs = vec![C::zero(); n + 1];
    for p in 2..=n {
        let mut trial = |v: C| -> Result<C, DulacError> {
            coeffs[p] = v;
            let s = Series1::new(p, coeffs[..=p].to_vec())?;
            let a_p = a.jet(p)?;
            let b_p = b.jet(p)?;
            Ok(separatrix_residual(&a_p, &b_p, &s, tol)?.coeff(p).clone())
        };
        let r0 = trial(C::zero())?;
        let r1 = trial(C::one())?;
        let slope = r1 - r0.clone();
        let inv = slope
            .inv()
            .filter(|_| !slope.is_negligible(tol))
            .ok_or(DulacError::DegenerateOracle { p })?;
        coeffs[p] = (-r0).mul_ref(&inv);
    }
    Ok(Separatrix {
        s: Series1::new(n, coeffs)?,
    })
}
