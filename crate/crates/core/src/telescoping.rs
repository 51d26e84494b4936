//! Weights, truncated sums and the binomial right-hand side of the super
//! telescoping identity, plus its generating function `(1 - x)^(-1/beta)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subsets::IntegerSubset;

/// Nonzero rational `beta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beta(Rational);

impl Beta {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::argument("beta must be nonzero"));
        }
        Ok(Beta(value))
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::argument("zero denominator"));
        }
        Beta::new(rational::ratio(p, q))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Beta::new(rational::parse_rational(s)?)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn inverse(&self) -> Rational {
        self.0.recip()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.0)
    }

    /// The boundary index `i >= 1` with `i * beta + 1 = 0`, if any.
    pub fn pole_index(&self) -> Option<u64> {
        if !self.0.is_negative() {
            return None;
        }
        let inv = -self.0.recip();
        if inv.is_integer() {
            inv.to_integer().to_u64()
        } else {
            None
        }
    }

    /// `1 / (i beta + 1)`.
    pub fn eta(&self, i: u64) -> Result<Rational> {
        let denom = &self.0 * Rational::from_integer(BigInt::from(i)) + Rational::one();
        if denom.is_zero() {
            return Err(Error::PoleHit { index: i });
        }
        Ok(denom.recip())
    }

    fn check_window(&self, max: u64) -> Result<()> {
        match self.pole_index() {
            Some(i) if i <= max => Err(Error::PoleHit { index: i }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::to_string(&self.0))
    }
}

/// `prod_{i in dS} 1/(i beta + 1)`; the empty subset has weight one.
pub fn weight(set: &IntegerSubset, beta: &Beta) -> Result<Rational> {
    set.boundary()
        .try_fold(Rational::one(), |acc, i| Ok(acc * beta.eta(i)?))
}

/// Sums `prod_{i in dS} eta(i)` over every subset of `[0, window]`, grouped
/// by total length `0..=max_len`, in one left-to-right sweep over the
/// lattice points.
///
/// The sweep state is (inside a component?, length accumulated so far); at
/// each point the state may toggle at most once, picking up `eta(i)`.
pub fn boundary_weight_sums<T, F>(max_len: usize, window: u64, mut eta: F) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
    F: FnMut(u64) -> T,
{
    let mut outside = vec![T::zero(); max_len + 1];
    let mut inside = vec![T::zero(); max_len + 1];
    outside[0] = T::one();
    for i in 0..=window {
        let e = eta(i);
        let opened: Vec<T> = outside.iter().map(|w| w.clone() * &e).collect();
        let closed: Vec<T> = inside.iter().map(|w| w.clone() * &e).collect();
        for k in 0..=max_len {
            outside[k] = outside[k].clone() + closed[k].clone();
            inside[k] = inside[k].clone() + opened[k].clone();
        }
        if i < window {
            // moving to i + 1 inside a component adds one unit of length
            for k in (1..=max_len).rev() {
                inside[k] = inside[k - 1].clone();
            }
            inside[0] = T::zero();
        }
    }
    outside
}

/// `sum_{S in A_{n,M}} weight(S, beta)` for every `n <= max_len`.
pub fn lhs_partial_sums(max_len: usize, window: u64, beta: &Beta) -> Result<Vec<Rational>> {
    if max_len > 0 {
        beta.check_window(window)?;
    }
    Ok(boundary_weight_sums(max_len, window, |i| {
        beta.eta(i).unwrap_or_else(|_| Rational::zero())
    }))
}

/// `sum_{S in A_{n,M}} weight(S, beta)`.
pub fn lhs_partial_sum(n: u64, window: u64, beta: &Beta) -> Result<Rational> {
    if window == 0 {
        return Err(Error::argument("window M must be at least 1"));
    }
    let sums = lhs_partial_sums(n as usize, window, beta)?;
    Ok(sums[n as usize].clone())
}

/// Floating-point version of [`lhs_partial_sums`] for real `beta > 0`, used
/// where windows are too large for exact arithmetic.
pub fn lhs_partial_sums_f64(max_len: usize, window: u64, beta: f64) -> Vec<f64> {
    boundary_weight_sums(max_len, window, |i| 1.0 / (i as f64 * beta + 1.0))
}

/// `binom(1/beta + n - 1, n) = prod_{j<n} (1/beta + j) / n!`.
pub fn rhs_binomial(n: u64, beta: &Beta) -> Rational {
    let inv = beta.inverse();
    let mut acc = Rational::one();
    for j in 0..n {
        acc = acc * (&inv + rational::int(j as i64)) / rational::int(j as i64 + 1);
    }
    acc
}

/// Taylor coefficients `c_0..c_N` of `(1 - x)^(-1/beta)`, from the
/// differential equation `(1 - x) A' = A / beta`.
pub fn gf_coefficients(beta: &Beta, max_degree: usize) -> Vec<Rational> {
    let inv = beta.inverse();
    let mut coeffs = Vec::with_capacity(max_degree + 1);
    coeffs.push(Rational::one());
    for n in 0..max_degree {
        // (n + 1) c_{n+1} = n c_n + c_n / beta
        let c = &coeffs[n];
        let next = (c * rational::int(n as i64) + c * &inv) / rational::int(n as i64 + 1);
        coeffs.push(next);
    }
    coeffs
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub window: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub abs_err: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub n: u64,
    pub beta: Beta,
    pub tol: Rational,
    pub rows: Vec<ConvergenceRow>,
    pub pass: bool,
}

impl ConvergenceReport {
    /// True when the error shrinks strictly along the schedule.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].abs_err < w[0].abs_err)
    }
}

/// Default tolerance `2 / M_final` for the base case `n = 1`.
pub fn default_tolerance(schedule: &[u64]) -> Option<Rational> {
    schedule.last().map(|&m| rational::ratio(2, m as i64))
}

/// Truncated sums against the binomial along an increasing window
/// schedule. Passes when the last error is at most `tol`; the comparison is
/// exact.
pub fn identity_report(
    n: u64,
    beta: &Beta,
    schedule: &[u64],
    tol: &Rational,
) -> Result<ConvergenceReport> {
    if schedule.is_empty() {
        return Err(Error::argument("empty window schedule"));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::argument("window schedule must be strictly increasing and positive"));
    }
    if !tol.is_positive() {
        return Err(Error::argument("tolerance must be positive"));
    }
    let last = *schedule.last().unwrap_or(&0);
    if n > 0 {
        beta.check_window(last)?;
    }
    if !beta.is_positive() {
        return Err(Error::argument(format!(
            "convergence check requires beta > 0, got {beta}"
        )));
    }
    let rhs = rhs_binomial(n, beta);
    let rows = schedule
        .iter()
        .map(|&m| {
            let lhs = lhs_partial_sum(n, m, beta)?;
            let abs_err = (&lhs - &rhs).abs();
            Ok(ConvergenceRow { window: m, lhs, rhs: rhs.clone(), abs_err })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.last().is_some_and(|r| &r.abs_err <= tol);
    Ok(ConvergenceReport { n, beta: beta.clone(), tol: tol.clone(), rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::subsets::{enumerate_family, IntegerSubset};
    use proptest::prelude::*;

    fn b(p: i64, q: i64) -> Beta {
        Beta::from_ratio(p, q).unwrap()
    }

    fn brute_force(n: u64, m: u64, beta: &Beta) -> Rational {
        enumerate_family(n, m)
            .iter()
            .map(|s| weight(s, beta).unwrap())
            .fold(Rational::zero(), |a, w| a + w)
    }

    #[test]
    fn weight_examples() {
        let fig = IntegerSubset::canonicalize(&[(0, 2), (4, 5), (6, 8)]).unwrap();
        assert_eq!(weight(&fig, &b(1, 1)).unwrap(), ratio(1, 5670));
        assert_eq!(weight(&IntegerSubset::empty(), &b(-7, 3)).unwrap(), int(1));
        let one_two = IntegerSubset::canonicalize(&[(1, 2)]).unwrap();
        assert_eq!(weight(&one_two, &b(1, 2)).unwrap(), ratio(1, 3));
    }

    #[test]
    fn weight_reports_pole_index() {
        let set = IntegerSubset::canonicalize(&[(1, 3)]).unwrap();
        assert_eq!(weight(&set, &b(-1, 3)), Err(Error::PoleHit { index: 3 }));
        assert_eq!(b(-1, 3).pole_index(), Some(3));
        assert_eq!(b(-2, 3).pole_index(), None);
        assert_eq!(b(1, 3).pole_index(), None);
    }

    #[test]
    fn partial_sum_closed_forms() {
        for m in [1u64, 2, 5, 17, 40] {
            assert_eq!(lhs_partial_sum(1, m, &b(1, 1)).unwrap(), int(1) - ratio(1, m as i64 + 1));
            for beta in [b(1, 2), b(3, 1), b(2, 3)] {
                let mb1 = beta.value() * int(m as i64) + int(1);
                let expected = beta.inverse() * (int(1) - mb1.recip());
                assert_eq!(lhs_partial_sum(1, m, &beta).unwrap(), expected);
                assert_eq!(lhs_partial_sum(0, m, &beta).unwrap(), int(1));
            }
        }
    }

    #[test]
    fn partial_sum_matches_brute_force() {
        for beta in [b(1, 1), b(1, 2), b(2, 3), b(3, 1), b(-2, 5)] {
            for n in 0..=4 {
                for m in 1..=12 {
                    assert_eq!(
                        lhs_partial_sum(n, m, &beta).unwrap(),
                        brute_force(n, m, &beta),
                        "n={n} M={m} beta={beta}"
                    );
                }
            }
        }
    }

    #[test]
    fn partial_sum_pole_guard() {
        assert_eq!(lhs_partial_sum(1, 10, &b(-1, 3)), Err(Error::PoleHit { index: 3 }));
        assert!(lhs_partial_sum(1, 2, &b(-1, 3)).is_ok());
        assert!(lhs_partial_sum(0, 10, &b(-1, 3)).is_ok());
    }

    #[test]
    fn rhs_examples() {
        for n in 0..10 {
            assert_eq!(rhs_binomial(n, &b(1, 1)), int(1));
        }
        assert_eq!(rhs_binomial(1, &b(2, 7)), ratio(7, 2));
        assert_eq!(rhs_binomial(2, &b(1, 2)), int(3));
        assert_eq!(rhs_binomial(0, &b(5, 3)), int(1));
    }

    #[test]
    fn gf_examples() {
        assert_eq!(gf_coefficients(&b(1, 1), 3), vec![int(1); 4]);
        assert_eq!(gf_coefficients(&b(1, 2), 2), vec![int(1), int(2), int(3)]);
        assert_eq!(gf_coefficients(&b(4, 9), 0), vec![int(1)]);
        for beta in [b(1, 1), b(1, 2), b(2, 3), b(3, 1), b(-5, 7)] {
            let c = gf_coefficients(&beta, 10);
            for (n, cn) in c.iter().enumerate() {
                assert_eq!(cn, &rhs_binomial(n as u64, &beta));
            }
        }
    }

    #[test]
    fn report_examples() {
        let r = identity_report(1, &b(1, 1), &[10, 100, 1000], &ratio(1, 100)).unwrap();
        let errs: Vec<_> = r.rows.iter().map(|row| row.abs_err.clone()).collect();
        assert_eq!(errs, vec![ratio(1, 11), ratio(1, 101), ratio(1, 1001)]);
        assert!(r.pass);

        let r0 = identity_report(0, &b(3, 4), &[5, 7], &ratio(1, 1000)).unwrap();
        assert!(r0.rows.iter().all(|row| row.abs_err.is_zero()));
        assert!(r0.pass);

        let r2 = identity_report(2, &b(1, 1), &[50, 100, 200], &ratio(1, 20)).unwrap();
        assert!(r2.strictly_decreasing());
        assert!(r2.pass);
    }

    #[test]
    fn report_guards() {
        assert!(matches!(
            identity_report(1, &b(1, 1), &[10, 10], &ratio(1, 2)),
            Err(Error::Argument(_))
        ));
        assert_eq!(
            identity_report(1, &b(-1, 3), &[10], &ratio(1, 2)),
            Err(Error::PoleHit { index: 3 })
        );
        assert!(matches!(
            identity_report(1, &b(-2, 3), &[10], &ratio(1, 2)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn float_sweep_tracks_exact_sweep() {
        let exact = lhs_partial_sums(5, 30, &b(1, 2)).unwrap();
        let float = lhs_partial_sums_f64(5, 30, 0.5);
        for (e, f) in exact.iter().zip(&float) {
            assert!((rational::to_f64(e) - f).abs() < 1e-12);
        }
    }

    fn positive_beta() -> impl Strategy<Value = Beta> {
        (1i64..12, 1i64..12).prop_map(|(p, q)| b(p, q))
    }

    proptest! {
        #[test]
        fn weight_is_multiplicative(
            left in prop::collection::vec((0u64..4, 1u64..4), 0..3),
            gap in 1u64..5,
            right in prop::collection::vec((0u64..4, 1u64..4), 0..3),
            beta in positive_beta(),
        ) {
            // lay components out left to right
            let mut pos = 0;
            let mut l = Vec::new();
            for (g, len) in left { pos += g; l.push((pos, pos + len)); pos += len + 1; }
            pos += gap;
            let mut r = Vec::new();
            for (g, len) in right { pos += g; r.push((pos, pos + len)); pos += len + 1; }
            let s = IntegerSubset::canonicalize(&l).unwrap();
            let t = IntegerSubset::canonicalize(&r).unwrap();
            let u = s.disjoint_union(&t).unwrap();
            prop_assert_eq!(
                weight(&u, &beta).unwrap(),
                weight(&s, &beta).unwrap() * weight(&t, &beta).unwrap()
            );
        }
    }
}
