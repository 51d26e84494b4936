//! Integer subsets: finite unions of closed intervals `[a, b]` with
//! nonnegative integer endpoints.
//!
//! A subset is always stored in canonical form: components are sorted and
//! separated by a gap of at least one unit, so the boundary `dS` consists of
//! `2 L(S)` distinct integers `a_1 < b_1 < a_2 < ... < b_L`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    a: u64,
    b: u64,
}

impl Interval {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn start(&self) -> u64 {
        self.a
    }

    pub fn end(&self) -> u64 {
        self.b
    }

    pub fn len(&self) -> u64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Where a point sits relative to a subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Boundary,
    Internal,
    External,
}

/// Canonical finite union of integer-endpoint intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegerSubset {
    intervals: Vec<Interval>,
}

/// Boundary, total length and component count of a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetStats {
    pub boundary: Vec<u64>,
    pub length: u64,
    pub components: usize,
}

impl IntegerSubset {
    pub fn empty() -> Self {
        IntegerSubset::default()
    }

    /// Builds the closed-interval union of `raw`, merging overlapping and
    /// endpoint-sharing intervals.
    pub fn canonicalize(raw: &[(u64, u64)]) -> Result<Self> {
        let mut ivs = raw
            .iter()
            .map(|&(a, b)| Interval::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        ivs.sort_unstable();
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(last) if iv.a <= last.b => last.b = last.b.max(iv.b),
                _ => out.push(iv),
            }
        }
        Ok(IntegerSubset { intervals: out })
    }

    /// Builds a subset from an already canonical, strictly increasing
    /// boundary list `a_1 < b_1 < ... < b_L`.
    pub fn from_boundary(points: &[u64]) -> Result<Self> {
        if !points.len().is_multiple_of(2) {
            return Err(Error::argument("boundary must have an even number of points"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::argument("boundary points must be strictly increasing"));
        }
        let intervals = points
            .chunks_exact(2)
            .map(|c| Interval { a: c[0], b: c[1] })
            .collect();
        Ok(IntegerSubset { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `dS` in increasing order.
    pub fn boundary(&self) -> impl Iterator<Item = u64> + '_ {
        self.intervals.iter().flat_map(|iv| [iv.a, iv.b])
    }

    /// `|S|`, the total length.
    pub fn total_length(&self) -> u64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// `L(S)`, the number of components.
    pub fn components(&self) -> usize {
        self.intervals.len()
    }

    pub fn max_point(&self) -> Option<u64> {
        self.intervals.last().map(|iv| iv.b)
    }

    pub fn stats(&self) -> SubsetStats {
        SubsetStats {
            boundary: self.boundary().collect(),
            length: self.total_length(),
            components: self.components(),
        }
    }

    pub fn is_boundary(&self, x: u64) -> bool {
        self.intervals.iter().any(|iv| iv.a == x || iv.b == x)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.intervals.iter().any(|iv| iv.a <= x && x <= iv.b)
    }

    pub fn classify_point(&self, x: u64) -> PointClass {
        for iv in &self.intervals {
            if x == iv.a || x == iv.b {
                return PointClass::Boundary;
            }
            if iv.a < x && x < iv.b {
                return PointClass::Internal;
            }
        }
        PointClass::External
    }

    /// Union with a subset lying entirely to the right of `self`, separated
    /// by at least one unit.
    pub fn disjoint_union(&self, other: &IntegerSubset) -> Result<Self> {
        let raw: Vec<(u64, u64)> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .map(|iv| (iv.a, iv.b))
            .collect();
        IntegerSubset::canonicalize(&raw)
    }
}

/// All subsets of `[0, max]` with total length `n`, in lexicographic order of
/// their boundary tuples. `n = 0` gives `{}` alone.
pub fn enumerate_family(n: u64, max: u64) -> Vec<IntegerSubset> {
    let mut out = Vec::new();
    for_each_in_family(n, max, |s| out.push(s.clone()));
    out
}

/// Visits `A_{n,max}` in the order of [`enumerate_family`] without
/// collecting it.
pub fn for_each_in_family(n: u64, max: u64, mut visit: impl FnMut(&IntegerSubset)) {
    let mut current = IntegerSubset::empty();
    if n > max {
        return;
    }
    extend(&mut current, 0, n, max, &mut visit);
}

fn extend(
    current: &mut IntegerSubset,
    first_free: u64,
    remaining: u64,
    max: u64,
    visit: &mut impl FnMut(&IntegerSubset),
) {
    if remaining == 0 {
        visit(current);
        return;
    }
    // each further component needs at least one unit of length
    let mut a = first_free;
    while a < max {
        let longest = remaining.min(max - a);
        for len in 1..=longest {
            let b = a + len;
            current.intervals.push(Interval { a, b });
            extend(current, b + 1, remaining - len, max, visit);
            current.intervals.pop();
        }
        a += 1;
    }
}

impl fmt::Display for IntegerSubset {
    /// Text notation `a-b,c-d`; the empty subset renders as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}-{}", iv.a, iv.b)?;
        }
        Ok(())
    }
}

impl FromStr for IntegerSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "{}" || t == "empty" {
            return Ok(IntegerSubset::empty());
        }
        let mut raw = Vec::new();
        for part in t.split(',') {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| bad_subset(s))?;
            let a = a.trim().parse::<u64>().map_err(|_| bad_subset(s))?;
            let b = b.trim().parse::<u64>().map_err(|_| bad_subset(s))?;
            raw.push((a, b));
        }
        IntegerSubset::canonicalize(&raw)
    }
}

fn bad_subset(s: &str) -> Error {
    let mut msg = String::from("malformed subset ");
    msg.push_str(s);
    msg.push_str("; expected a-b,c-d");
    Error::Parse(msg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(raw: &[(u64, u64)]) -> IntegerSubset {
        IntegerSubset::canonicalize(raw).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let two = s(&[(1, 2), (3, 4)]);
        assert_eq!(two.components(), 2);
        assert_eq!(s(&[(1, 2), (2, 5)]), s(&[(1, 5)]));
        assert_eq!(s(&[]), IntegerSubset::empty());
        assert_eq!(s(&[(0, 4), (1, 2)]), s(&[(0, 4)]));
    }

    #[test]
    fn canonicalize_rejects_degenerate() {
        assert_eq!(
            IntegerSubset::canonicalize(&[(3, 3)]),
            Err(Error::InvalidInterval { a: 3, b: 3 })
        );
        assert!(IntegerSubset::canonicalize(&[(4, 1)]).is_err());
    }

    #[test]
    fn stats_examples() {
        let fig = s(&[(0, 2), (4, 5), (6, 8)]);
        let st = fig.stats();
        assert_eq!(st.boundary, [0, 2, 4, 5, 6, 8]);
        assert_eq!(st.length, 5);
        assert_eq!(st.components, 3);

        let e = IntegerSubset::empty().stats();
        assert!(e.boundary.is_empty());
        assert_eq!((e.length, e.components), (0, 0));

        let one = s(&[(1, 4)]).stats();
        assert_eq!((one.boundary, one.length, one.components), (vec![1, 4], 3, 1));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_family(1, 2), vec![s(&[(0, 1)]), s(&[(1, 2)])]);
        assert_eq!(
            enumerate_family(2, 3),
            vec![s(&[(0, 1), (2, 3)]), s(&[(0, 2)]), s(&[(1, 3)])]
        );
        assert_eq!(enumerate_family(0, 10), vec![IntegerSubset::empty()]);
        assert!(enumerate_family(5, 4).is_empty());
    }

    #[test]
    fn classify_examples() {
        let iv = s(&[(1, 4)]);
        assert_eq!(iv.classify_point(1), PointClass::Boundary);
        assert_eq!(iv.classify_point(2), PointClass::Internal);
        assert_eq!(iv.classify_point(5), PointClass::External);
        assert_eq!(iv.classify_point(0), PointClass::External);
    }

    // Independent count: number of boundary tuples 0 <= x_1 < ... < x_2L <= M
    // with sum of (x_2j - x_2j-1) = n, by DP over (next free point, length left).
    fn dp_count(n: u64, m: u64) -> u64 {
        // ways[p][r]: completions with first admissible left endpoint p, r left
        let (n, m) = (n as usize, m as usize);
        let mut ways = vec![vec![0u64; n + 1]; m + 3];
        for p in (0..=m + 2).rev() {
            ways[p][0] = 1;
            for r in 1..=n {
                let mut total = 0;
                for a in p..=m {
                    for len in 1..=r {
                        let b = a + len;
                        if b > m {
                            break;
                        }
                        total += ways[(b + 1).min(m + 2)][r - len];
                    }
                }
                ways[p][r] = total;
            }
        }
        ways[0][n]
    }

    #[test]
    fn family_matches_tuple_count() {
        for n in 0..=6u64 {
            for m in 1..=20u64 {
                let fam = enumerate_family(n, m);
                let expected = if n > m { 0 } else { dp_count(n, m) };
                assert_eq!(fam.len() as u64, expected, "n={n} M={m}");
                for w in fam.windows(2) {
                    let a: Vec<u64> = w[0].boundary().collect();
                    let b: Vec<u64> = w[1].boundary().collect();
                    assert!(a < b, "order/duplicates at n={n} M={m}");
                }
                for set in &fam {
                    assert_eq!(set.total_length(), n);
                    let bd: Vec<u64> = set.boundary().collect();
                    assert!(bd.windows(2).all(|w| w[0] < w[1]));
                    assert!(set.max_point().is_none_or(|x| x <= m));
                    assert_eq!(IntegerSubset::from_boundary(&bd).unwrap(), *set);
                }
            }
        }
    }

    #[test]
    fn text_notation_round_trips() {
        let fig = s(&[(0, 2), (4, 5), (6, 8)]);
        assert_eq!(fig.to_string(), "0-2,4-5,6-8");
        assert_eq!("0-2,4-5,6-8".parse::<IntegerSubset>().unwrap(), fig);
        assert_eq!("{}".parse::<IntegerSubset>().unwrap(), IntegerSubset::empty());
        assert!("1-x".parse::<IntegerSubset>().is_err());
        assert!("3-1".parse::<IntegerSubset>().is_err());
    }

    fn raw_intervals() -> impl Strategy<Value = Vec<(u64, u64)>> {
        prop::collection::vec((0u64..40, 1u64..8).prop_map(|(a, l)| (a, a + l)), 0..6)
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_order_free(mut raw in raw_intervals()) {
            let once = IntegerSubset::canonicalize(&raw).unwrap();
            let back: Vec<(u64, u64)> =
                once.intervals().iter().map(|iv| (iv.start(), iv.end())).collect();
            prop_assert_eq!(&IntegerSubset::canonicalize(&back).unwrap(), &once);
            raw.reverse();
            prop_assert_eq!(&IntegerSubset::canonicalize(&raw).unwrap(), &once);
            // same point set on half-integers
            for k in 0..100u64 {
                let x2 = k; // x = k/2
                let in_raw = raw.iter().any(|&(a, b)| 2 * a <= x2 && x2 <= 2 * b);
                let in_set = once.intervals().iter().any(|iv| 2 * iv.start() <= x2 && x2 <= 2 * iv.end());
                prop_assert_eq!(in_raw, in_set);
            }
        }

        #[test]
        fn classify_partitions_points(raw in raw_intervals()) {
            let set = IntegerSubset::canonicalize(&raw).unwrap();
            let m = set.max_point().unwrap_or(0);
            for x in 0..=m + 1 {
                let c = set.classify_point(x);
                let boundary = set.is_boundary(x);
                let internal = set.contains(x) && !boundary;
                let external = !set.contains(x);
                prop_assert_eq!([boundary, internal, external].iter().filter(|&&t| t).count(), 1);
                let expected = if boundary { PointClass::Boundary } else if internal { PointClass::Internal } else { PointClass::External };
                prop_assert_eq!(c, expected);
            }
        }
    }
}
