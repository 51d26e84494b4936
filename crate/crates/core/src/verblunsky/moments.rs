use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::{LaurentMatrix, TruncatedSeries};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::telescoping::Beta;

/// Largest `deg(p)` accepted by [`multiindex_moment`].
pub const MAX_MULTIINDEX_DEGREE: u64 = 5;
/// Largest `k` accepted by the symbolic expansions [`xhat_variance_exact`]
/// and [`loop_product_real`].
pub const MAX_SYMBOLIC_LENGTH: usize = 16;
const MAX_LOOP_LENGTH: usize = 200;

/// Finitely supported `j -> p(j)` over positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: BTreeMap<u64, u64>,
}

impl MultiIndex {
    pub fn new(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut m = MultiIndex::default();
        for (j, count) in pairs {
            if j == 0 {
                return Err(Error::argument("multi-index positions start at 1"));
            }
            if count > 0 {
                *m.entries.entry(j).or_default() += count;
            }
        }
        Ok(m)
    }

    /// The unit multi-index `e_j`.
    pub fn unit(j: u64) -> Self {
        let mut entries = BTreeMap::new();
        if j > 0 {
            entries.insert(j, 1);
        }
        MultiIndex { entries }
    }

    pub fn entries(&self) -> &BTreeMap<u64, u64> {
        &self.entries
    }

    pub fn get(&self, j: u64) -> u64 {
        self.entries.get(&j).copied().unwrap_or(0)
    }

    /// `|p| = sum_j p(j)`.
    pub fn size(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `deg(p) = sum_j j p(j)`.
    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|(j, c)| j * c).sum()
    }

    /// `p! = prod_j p(j)!`.
    pub fn factorial(&self) -> BigUint {
        self.entries.values().map(|&c| factorial(c)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = self.entries.clone();
        for (&j, &c) in &other.entries {
            *entries.entry(j).or_default() += c;
        }
        MultiIndex { entries }
    }

    /// All multi-indices of degree `n`, i.e. the partitions of `n` in
    /// multiplicity form.
    pub fn all_of_degree(n: u64) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = MultiIndex::default();
        partitions(n, n, &mut current, &mut out);
        out
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn partitions(rest: u64, largest: u64, current: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=largest.min(rest)).rev() {
        *current.entries.entry(part).or_default() += 1;
        partitions(rest - part, part, current, out);
        let slot = current.entries.get_mut(&part).expect("part was inserted");
        *slot -= 1;
        if *slot == 0 {
            current.entries.remove(&part);
        }
    }
}

fn check_positive(beta: &Beta) -> Result<()> {
    if !beta.is_positive() {
        return Err(Error::argument("beta must be positive"));
    }
    Ok(())
}

/// `E|alpha_n|^(2K) = K! / ((n beta + 1) ... (n beta + K))`.
pub fn alpha_moment(n: u64, k: u64, beta: &Beta) -> Result<Rational> {
    if n == 0 {
        return Err(Error::argument("alpha index n starts at 1"));
    }
    check_positive(beta)?;
    let nb = rational::int(n as i64) * beta.value();
    let mut acc = Rational::one();
    for j in 1..=k {
        acc = acc * rational::int(j as i64) / (&nb + rational::int(j as i64));
    }
    Ok(acc)
}

/// `sum_{lambda |- n} beta^(-l(lambda)) / prod_u u^(m_u) m_u!`.
pub fn moment_partition_sum(n: u64, beta: &Beta) -> Rational {
    let inv = beta.inverse();
    MultiIndex::all_of_degree(n)
        .iter()
        .map(|lambda| {
            let z: BigUint = lambda
                .entries()
                .iter()
                .map(|(&u, &m)| Pow::pow(BigUint::from(u), m) * factorial(m))
                .product();
            Pow::pow(&inv, lambda.size() as u32) / Rational::from_integer(z.into())
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `E(x^p (x^q)^*) = sum_k a(p, q, k) beta^(-k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndexMoment {
    pub value: Rational,
    /// `a(p, q, k)` for `k = 0..=deg(p)`.
    pub coefficients: Vec<Rational>,
}

// sum over families {J_{n,r}} with deg(J_{n,r}) = n, keyed by sum_{n,r} J_{n,r},
// of 1 / prod J_{n,r}!
fn decompositions(p: &MultiIndex) -> BTreeMap<MultiIndex, Rational> {
    let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    acc.insert(MultiIndex::default(), Rational::one());
    for (&n, &count) in p.entries() {
        let pieces: Vec<(MultiIndex, Rational)> = MultiIndex::all_of_degree(n)
            .into_iter()
            .map(|j| {
                let w = Rational::one() / Rational::from_integer(j.factorial().into());
                (j, w)
            })
            .collect();
        for _ in 0..count {
            let mut next: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
            for (t, w) in &acc {
                for (j, wj) in &pieces {
                    *next.entry(t.add(j)).or_insert_with(Rational::zero) += w * wj;
                }
            }
            acc = next;
        }
    }
    acc
}

/// Exact `E(x^p (x^q)^*)` for `e^(-f) = 1 + sum x_n z^n` under the free
/// field with `E|f_n|^2 = 1/(n beta)`.
pub fn multiindex_moment(p: &MultiIndex, q: &MultiIndex, beta: &Beta) -> Result<MultiIndexMoment> {
    check_positive(beta)?;
    let degree = p.degree().max(q.degree());
    if degree > MAX_MULTIINDEX_DEGREE {
        return Err(Error::Resource(format!(
            "multi-index degree {degree} exceeds the cap {MAX_MULTIINDEX_DEGREE}"
        )));
    }
    let mut coefficients = vec![Rational::zero(); p.degree() as usize + 1];
    if p.degree() != q.degree() {
        return Ok(MultiIndexMoment { value: Rational::zero(), coefficients });
    }
    let left = decompositions(p);
    let right = decompositions(q);
    for (t, wp) in &left {
        let Some(wq) = right.get(t) else { continue };
        // E(f^T (f^T)^*) = T! / prod_u u^T(u) * beta^(-|T|)
        let weight: BigUint = t
            .entries()
            .iter()
            .map(|(&u, &c)| Pow::pow(BigUint::from(u), c))
            .product();
        let gaussian = Rational::new(t.factorial().into(), weight.into());
        coefficients[t.size() as usize] += wp * wq * gaussian;
    }
    let inv = beta.inverse();
    let value = coefficients
        .iter()
        .enumerate()
        .map(|(k, a)| a * Pow::pow(&inv, k as u32))
        .fold(Rational::zero(), |a, b| a + b);
    Ok(MultiIndexMoment { value, coefficients })
}

// alpha_j^a (alpha_j^*)^b factors as (j, a, b), sorted by j
type Monomial = Vec<(u64, u32, u32)>;

#[derive(Debug, Clone, PartialEq)]
struct SymbolicPoly(BTreeMap<Monomial, i64>);

impl SymbolicPoly {
    fn var(j: u64, conj: bool) -> Self {
        let m = if conj { vec![(j, 0, 1)] } else { vec![(j, 1, 0)] };
        SymbolicPoly(BTreeMap::from([(m, 1)]))
    }
}

fn monomial_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for &(j, x, y) in a.iter().chain(b) {
        let e = out.entry(j).or_default();
        e.0 += x;
        e.1 += y;
    }
    out.into_iter().map(|(j, (x, y))| (j, x, y)).collect()
}

impl Add for SymbolicPoly {
    type Output = Self;

    fn add(mut self, other: Self) -> Self {
        for (m, c) in other.0 {
            let e = self.0.entry(m).or_insert(0);
            *e += c;
        }
        self.0.retain(|_, c| *c != 0);
        self
    }
}

impl Mul for SymbolicPoly {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let mut out: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                *out.entry(monomial_mul(a, b)).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        SymbolicPoly(out)
    }
}

impl Zero for SymbolicPoly {
    fn zero() -> Self {
        SymbolicPoly(BTreeMap::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for SymbolicPoly {
    fn one() -> Self {
        SymbolicPoly(BTreeMap::from([(Vec::new(), 1)]))
    }
}

fn check_lengths(k: usize, cap: usize) -> Result<()> {
    if k > cap {
        return Err(Error::Resource(format!("product length {k} exceeds the cap {cap}")));
    }
    Ok(())
}

type Term<'a> = (&'a Monomial, i64);

/// Exact `E|xhat_n|^2` for the product of `k_max` factors, by symbolic
/// expansion of `xhat_n` into monomials in `alpha_j, alpha_j^*` and the
/// moments of the rotation-invariant laws `E|alpha_j|^(2K)`.
pub fn xhat_variance_exact(n: u64, k_max: u64, beta: &Beta) -> Result<Rational> {
    check_positive(beta)?;
    let (n, k) = (n as usize, k_max as usize);
    check_lengths(k, MAX_SYMBOLIC_LENGTH)?;
    let radius = k * (k + 1) / 2;
    let mut product = LaurentMatrix::<SymbolicPoly>::identity(radius);
    for j in 1..=k as u64 {
        product = product.left_mul_elementary(
            j as usize,
            &SymbolicPoly::var(j, false),
            &SymbolicPoly::var(j, true),
        );
    }
    let xhat = product.coeff(1, 0, n as i64) + product.coeff(1, 1, n as i64);

    // E[m m'^*] vanishes unless a_j - b_j agree for every j
    let mut by_phase: BTreeMap<Vec<(u64, i64)>, Vec<Term>> = BTreeMap::new();
    for (m, &c) in &xhat.0 {
        let phase = m
            .iter()
            .filter(|(_, a, b)| a != b)
            .map(|&(j, a, b)| (j, a as i64 - b as i64))
            .collect();
        by_phase.entry(phase).or_default().push((m, c));
    }
    let mut total = Rational::zero();
    for group in by_phase.values() {
        for (m1, c1) in group {
            for (m2, c2) in group {
                let mut term = rational::int(c1 * c2);
                // alpha^(a + b') (alpha^*)^(b + a') with a + b' = b + a'
                for (j, a, b) in monomial_mul(m1, &conjugate(m2)) {
                    debug_assert_eq!(a, b);
                    term *= alpha_moment(j, a as u64, beta)?;
                }
                total += term;
            }
        }
    }
    Ok(total)
}

fn conjugate(m: &Monomial) -> Monomial {
    m.iter().map(|&(j, a, b)| (j, b, a)).collect()
}

/// Coefficients `c_0..c_{n_max}` of `A(x)` from the real product
/// `... [[1, eta_1 x^(-1)], [eta_1 x, 1]] [[1, eta_0], [eta_0, 1]]` over
/// `k_max + 1` factors, `eta_i = 1/(i beta + 1)`.
///
/// `A(x)` is the bottom-right entry: its positive powers of `x` are the
/// paths that enter the top row at a boundary point and leave it at a
/// larger one, so `c_n = sum_{S in A_{n, k_max}} prod eta_i`. The top-left
/// entry carries the same sums at `x^(-n)`.
pub fn loop_product_real(beta: &Beta, k_max: u64, n_max: u64) -> Result<TruncatedSeries<Rational>> {
    let (k, n) = (k_max as usize, n_max as usize);
    check_lengths(k, MAX_LOOP_LENGTH)?;
    let radius = k * (k + 1) / 2;
    let mut product = LaurentMatrix::<Rational>::identity(radius);
    for j in 0..=k {
        let eta = beta.eta(j as u64)?;
        product = product.left_mul_elementary(j, &eta, &eta);
    }
    let coeffs = (0..=n as i64).map(|d| product.coeff(1, 1, d)).collect();
    Ok(TruncatedSeries::new(coeffs, n))
}
