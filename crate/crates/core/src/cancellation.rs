//! Residue cancellation behind the removable poles of the truncated sums.
//!
//! Each weight splits into partial fractions
//!
//! ```text
//!   prod_{i in dS} 1/(i beta + 1) = sum_{q in dS} C_q(S) / (q beta + 1),
//!   C_q(S) = q^(2L(S) - 1) / prod_{i in dS, i != q} (q - i),
//! ```
//!
//! and the residues `C_q` cancel in pairs `S <-> R_d(S)` under d-reflections
//! about `q`, with `d = q` for `q < M/2` and `d = g(S)` (the minimum
//! symmetric gap) for `n <= q <= M - n`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subsets::{for_each_in_family, IntegerSubset};
use crate::telescoping::{weight, Beta};

/// The partial-fraction coefficient `C_q(S)`. Zero at `q = 0`.
pub fn cq(set: &IntegerSubset, q: u64) -> Result<Rational> {
    if !set.is_boundary(q) {
        return Err(Error::NotBoundary { q });
    }
    if q == 0 {
        return Ok(Rational::zero());
    }
    let qi = BigInt::from(q);
    let numer = qi.pow(2 * set.components() as u32 - 1);
    let denom = set
        .boundary()
        .filter(|&i| i != q)
        .fold(BigInt::one(), |acc, i| acc * (&qi - BigInt::from(i)));
    Ok(Rational::new(numer, denom))
}

/// Checks `weight(S, beta) = sum_q C_q(S) / (q beta + 1)` exactly at every
/// sample. Agreement at `|dS| + 1` distinct samples certifies the identity of
/// rational functions. The empty subset passes trivially: both sides are
/// the empty product of the expansion.
pub fn partial_fraction_check(set: &IntegerSubset, samples: &[Rational]) -> Result<bool> {
    if set.is_empty() {
        return Ok(true);
    }
    let coeffs = set
        .boundary()
        .map(|q| Ok((q, cq(set, q)?)))
        .collect::<Result<Vec<_>>>()?;
    for sample in samples {
        let beta = Beta::new(sample.clone())?;
        let lhs = weight(set, &beta)?;
        let mut rhs = Rational::zero();
        for (q, c) in &coeffs {
            rhs += c * beta.eta(*q)?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`partial_fraction_check`] at the samples `beta = 1, 2, ..., |dS| + 1`.
pub fn certify_partial_fraction(set: &IntegerSubset) -> Result<bool> {
    let count = 2 * set.components() as i64 + 1;
    let samples: Vec<Rational> = (1..=count).map(crate::rational::int).collect();
    partial_fraction_check(set, &samples)
}

/// The d-reflection `R_d(S)` about `q`: mirror `S` inside `[q - d, q + d]`,
/// keep it outside, take the closure. Isolated points left by the window
/// edges carry no length and are dropped.
pub fn reflect(set: &IntegerSubset, q: u64, d: u64) -> Result<IntegerSubset> {
    if d > q {
        return Err(Error::Window { q, d });
    }
    let (lo_w, hi_w) = (q - d, q + d);
    let mut raw = Vec::with_capacity(2 * set.components() + 1);
    for iv in set.intervals() {
        let (a, b) = (iv.start(), iv.end());
        let (lo, hi) = (a.max(lo_w), b.min(hi_w));
        if lo < hi {
            raw.push((2 * q - hi, 2 * q - lo));
        }
        if a < b.min(lo_w) {
            raw.push((a, b.min(lo_w)));
        }
        if a.max(hi_w) < b {
            raw.push((a.max(hi_w), b));
        }
    }
    IntegerSubset::canonicalize(&raw)
}

/// Radius `m` of the component `[q - m, q + m]` containing `q` of
/// `S ∪ R_inf(S)`, the union of `S` with its full mirror image about `q`.
/// This is the real infimum of the gap definition.
pub fn min_symmetric_gap(set: &IntegerSubset, q: u64) -> Result<u64> {
    if !set.is_boundary(q) {
        return Err(Error::NotBoundary { q });
    }
    let q = q as i64;
    let mut pieces: Vec<(i64, i64)> = Vec::with_capacity(2 * set.components());
    for iv in set.intervals() {
        let (a, b) = (iv.start() as i64, iv.end() as i64);
        pieces.push((a, b));
        pieces.push((2 * q - b, 2 * q - a));
    }
    pieces.sort_unstable();
    let mut merged: Vec<(i64, i64)> = Vec::with_capacity(pieces.len());
    for (a, b) in pieces {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
        .iter()
        .find(|&&(lo, hi)| lo <= q && q <= hi)
        .map(|&(_, hi)| (hi - q) as u64)
        .ok_or(Error::NotBoundary { q: q as u64 })
}

/// `sum C_q(S)` over `S in A_{n,M}` with `q in dS`, for every `q in 0..=M`.
pub fn residue_table(n: u64, window: u64) -> Vec<Rational> {
    let mut sums = vec![Rational::zero(); window as usize + 1];
    for_each_in_family(n, window, |set| {
        for q in set.boundary().filter(|&q| q > 0) {
            if let Ok(c) = cq(set, q) {
                sums[q as usize] += c;
            }
        }
    });
    sums
}

/// `sum C_q(S)` over `S in A_{n,M}` with `q in dS`.
pub fn residue_sum(q: u64, n: u64, window: u64) -> Result<Rational> {
    if q == 0 || q > window {
        return Err(Error::argument("q must lie in 1..=M"));
    }
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    let mut sum = Rational::zero();
    for_each_in_family(n, window, |set| {
        if set.is_boundary(q) {
            if let Ok(c) = cq(set, q) {
                sum += c;
            }
        }
    });
    Ok(sum)
}

/// `q < M/2`: pair by `q`-reflection.
pub fn reflection_regime(q: u64, window: u64) -> bool {
    2 * q < window
}

/// `n <= q <= M - n`: pair by the minimum symmetric gap.
pub fn gap_regime(q: u64, n: u64, window: u64) -> bool {
    n <= q && q + n <= window
}

/// The reflection radius that pairs `S` in the residue sum at `q`, if one of
/// the two cancellation regimes applies.
pub fn pairing_radius(set: &IntegerSubset, q: u64, window: u64) -> Result<Option<u64>> {
    if q == 0 {
        return Ok(None);
    }
    if reflection_regime(q, window) {
        return Ok(Some(q));
    }
    if gap_regime(q, set.total_length(), window) {
        return Ok(Some(min_symmetric_gap(set, q)?));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub set: IntegerSubset,
    pub q: u64,
    pub d: u64,
    pub reflected: IntegerSubset,
    pub components: usize,
    pub reflected_components: usize,
    pub residue: Rational,
    pub reflected_residue: Rational,
    pub sign_flip: bool,
}

pub fn pair_check(set: &IntegerSubset, q: u64, d: u64) -> Result<PairReport> {
    let residue = cq(set, q)?;
    let reflected = reflect(set, q, d)?;
    let reflected_residue = cq(&reflected, q)?;
    let sign_flip = reflected_residue == -residue.clone();
    Ok(PairReport {
        set: set.clone(),
        q,
        d,
        components: set.components(),
        reflected_components: reflected.components(),
        reflected,
        residue,
        reflected_residue,
        sign_flip,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRow {
    pub q: u64,
    pub residue: Rational,
    pub reflection_lemma: bool,
    pub gap_lemma: bool,
}

impl ResidueRow {
    pub fn covered(&self) -> bool {
        self.reflection_lemma || self.gap_lemma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueTable {
    pub n: u64,
    pub window: u64,
    pub rows: Vec<ResidueRow>,
    pub pass: bool,
}

/// Residue sums for `q = 1..=M` with the regime each falls under. Passes
/// iff every covered `q` has residue exactly zero.
pub fn pole_removability_report(n: u64, window: u64) -> Result<ResidueTable> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    if window < 2 * n + 2 {
        return Err(Error::argument("window M must be at least 2n + 2"));
    }
    let sums = residue_table(n, window);
    let rows: Vec<ResidueRow> = (1..=window)
        .map(|q| ResidueRow {
            q,
            residue: sums[q as usize].clone(),
            reflection_lemma: reflection_regime(q, window),
            gap_lemma: gap_regime(q, n, window),
        })
        .collect();
    let pass = rows.iter().filter(|r| r.covered()).all(|r| r.residue.is_zero());
    Ok(ResidueTable { n, window, rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::subsets::enumerate_family;

    fn s(raw: &[(u64, u64)]) -> IntegerSubset {
        IntegerSubset::canonicalize(raw).unwrap()
    }

    #[test]
    fn cq_examples() {
        assert_eq!(cq(&s(&[(1, 2)]), 2).unwrap(), int(2));
        assert_eq!(cq(&s(&[(1, 2)]), 1).unwrap(), int(-1));
        assert_eq!(cq(&s(&[(0, 1)]), 1).unwrap(), int(1));
        assert_eq!(cq(&s(&[(0, 1)]), 0).unwrap(), int(0));
        assert_eq!(cq(&s(&[(0, 1)]), 3), Err(Error::NotBoundary { q: 3 }));
        // 1/((b+1)(2b+1)) = -1/(b+1) + 2/(2b+1) at b = 1
        assert_eq!(ratio(1, 6), ratio(-1, 2) + ratio(2, 3));
    }

    #[test]
    fn partial_fraction_examples() {
        let samples = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert!(partial_fraction_check(&s(&[(1, 2)]), &samples(&[1, 2, 3])).unwrap());
        assert!(partial_fraction_check(&s(&[(0, 1)]), &samples(&[1, 2])).unwrap());
        assert!(partial_fraction_check(&IntegerSubset::empty(), &samples(&[5])).unwrap());
        assert_eq!(
            partial_fraction_check(&s(&[(1, 2)]), &[ratio(-1, 2)]),
            Err(Error::PoleHit { index: 2 })
        );
        assert!(partial_fraction_check(&s(&[(1, 2)]), &[int(0)]).is_err());
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(
            reflect(&s(&[(2, 5), (8, 9)]), 2, 2).unwrap(),
            s(&[(0, 2), (4, 5), (8, 9)])
        );
        assert_eq!(reflect(&s(&[(0, 2)]), 1, 1).unwrap(), s(&[(0, 2)]));
        assert_eq!(reflect(&s(&[(0, 1)]), 1, 1).unwrap(), s(&[(1, 2)]));
        assert_eq!(reflect(&s(&[(0, 1)]), 1, 2), Err(Error::Window { q: 1, d: 2 }));
        // 2q a left endpoint: the mirrored point 0 is isolated and dropped
        assert_eq!(reflect(&s(&[(0, 1), (2, 3)]), 1, 1).unwrap(), s(&[(1, 3)]));
        assert_eq!(reflect(&s(&[(1, 3)]), 1, 1).unwrap(), s(&[(0, 1), (2, 3)]));
    }

    #[test]
    fn gap_examples() {
        assert_eq!(min_symmetric_gap(&s(&[(2, 5), (8, 9)]), 2).unwrap(), 3);
        assert_eq!(min_symmetric_gap(&s(&[(0, 1)]), 1).unwrap(), 1);
        for q in 0..6 {
            for n in 1..5 {
                assert_eq!(min_symmetric_gap(&s(&[(q, q + n)]), q).unwrap(), n);
            }
        }
        assert_eq!(min_symmetric_gap(&s(&[(2, 5)]), 2).unwrap(), 3);
        assert!(min_symmetric_gap(&s(&[(2, 5)]), 3).is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_sum(1, 1, 4).unwrap(), int(0));
        assert_eq!(residue_sum(2, 2, 8).unwrap(), int(0));
        assert_eq!(residue_sum(3, 1, 3).unwrap(), int(3));
        let table = residue_table(1, 3);
        assert_eq!(table[3], int(3));
    }

    #[test]
    fn pair_examples() {
        let r = pair_check(&s(&[(0, 1)]), 1, 1).unwrap();
        assert_eq!(r.reflected, s(&[(1, 2)]));
        assert_eq!((r.components, r.reflected_components), (1, 1));
        assert!(r.sign_flip);

        let fig = pair_check(&s(&[(2, 5), (8, 9)]), 2, 2).unwrap();
        assert_eq!(fig.reflected, s(&[(0, 2), (4, 5), (8, 9)]));
        assert!(fig.sign_flip);

        let r = pair_check(&s(&[(1, 2)]), 1, 1).unwrap();
        assert_eq!(r.reflected, s(&[(0, 1)]));
        assert_eq!(r.residue, int(-1));
        assert_eq!(r.reflected_residue, int(1));
        assert!(r.sign_flip);
    }

    #[test]
    fn removability_examples() {
        let t = pole_removability_report(1, 10).unwrap();
        assert!(t.pass);
        for row in &t.rows {
            assert_eq!(row.reflection_lemma, row.q <= 4);
            assert_eq!(row.gap_lemma, row.q <= 9);
            if row.q <= 9 {
                assert_eq!(row.residue, int(0));
            }
        }
        assert_ne!(t.rows[9].residue, int(0));

        let t2 = pole_removability_report(2, 12).unwrap();
        assert!(t2.pass);
        assert!(matches!(pole_removability_report(1, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn reflections_are_involutions() {
        for n in 1..=4 {
            for m in 1..=12 {
                for set in enumerate_family(n, m) {
                    for q in set.boundary().filter(|&q| q > 0) {
                        for d in 1..=q {
                            let r = reflect(&set, q, d).unwrap();
                            assert_eq!(reflect(&r, q, d).unwrap(), set, "S={set} q={q} d={d}");
                            assert_ne!(r, set, "S={set} q={q} d={d}");
                            assert_eq!(r.total_length(), set.total_length());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gap_reflection_is_stable() {
        for n in 1..=4 {
            for m in 1..=12 {
                for set in enumerate_family(n, m) {
                    for q in set.boundary().filter(|&q| q >= n) {
                        let d = min_symmetric_gap(&set, q).unwrap();
                        assert!(d <= n);
                        let r = reflect(&set, q, d).unwrap();
                        assert_eq!(r.components(), set.components(), "S={set} q={q}");
                        assert_eq!(min_symmetric_gap(&r, q).unwrap(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn certified_partial_fractions_small() {
        for n in 0..=3 {
            for set in enumerate_family(n, 8) {
                assert!(certify_partial_fraction(&set).unwrap(), "S={set}");
            }
        }
    }
}
