//! Exact samplers for the subset measure
//! `(1 - x)^(1/beta) weight(S) x^|S|` and its window-truncated versions.
//!
//! A draw picks the size `n` first, then a subset of `[0, W]` of length `n`
//! by walking the lattice points left to right. The walk uses backward
//! completion weights kept in log space, so it is exact for the
//! `W`-truncated conditional law without enumerating `A_{n,W}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::ModelParams;
use crate::error::{Error, Result};
use crate::subsets::IntegerSubset;
use crate::telescoping::lhs_partial_sums_f64;

const QUANTILE_TAIL: f64 = 1e-12;
const MAX_WINDOW: u64 = 1 << 14;

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// The largest size drawn by [`sample_size`]: the `1 - 1e-12` quantile of
/// the negative binomial law.
pub fn size_quantile_cap(beta: f64, x: f64) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    let inv = 1.0 / beta;
    let mut p = libm::pow(1.0 - x, inv);
    let mut cdf = p;
    let mut n = 0u64;
    while cdf < 1.0 - QUANTILE_TAIL && n < 1 << 20 {
        p *= x * (inv + n as f64) / (n as f64 + 1.0);
        n += 1;
        cdf += p;
        if p == 0.0 {
            break;
        }
    }
    n
}

/// Draws `n` with `P(n) = (1 - x)^(1/beta) binom(1/beta + n - 1, n) x^n` by
/// inverse CDF, stepping with `P(n+1)/P(n) = x (1/beta + n)/(n + 1)`.
pub fn sample_size<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> u64 {
    draw_size(params.beta_f64(), params.x_f64(), rng)
}

fn draw_size<R: Rng + ?Sized>(beta: f64, x: f64, rng: &mut R) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    let cap = size_quantile_cap(beta, x);
    let inv = 1.0 / beta;
    let u: f64 = rng.random();
    let mut p = libm::pow(1.0 - x, inv);
    let mut cdf = p;
    let mut n = 0u64;
    while u > cdf && n < cap {
        p *= x * (inv + n as f64) / (n as f64 + 1.0);
        n += 1;
        cdf += p;
    }
    n
}

/// Conditional sampler for subsets of `[0, window]` of a prescribed length
/// `n <= max_len`, with probability proportional to
/// `prod_{i in dS} 1/(i beta + 1)`.
#[derive(Debug, Clone)]
pub struct ConditionalSampler {
    window: u64,
    max_len: usize,
    log_eta: Vec<f64>,
    // ln of the completion weight from point i in state (inside?, length left)
    table: Vec<f64>,
}

impl ConditionalSampler {
    pub fn new(beta: f64, window: u64, max_len: usize) -> Self {
        let points = window as usize + 1;
        let log_eta: Vec<f64> = (0..points).map(|i| -libm::log1p(i as f64 * beta)).collect();
        let width = 2 * (max_len + 1);
        let mut table = vec![f64::NEG_INFINITY; points * width];
        let idx = |i: usize, inside: usize, r: usize| i * width + inside * (max_len + 1) + r;
        table[idx(points - 1, 0, 0)] = 0.0;
        table[idx(points - 1, 1, 0)] = log_eta[points - 1];
        for i in (0..points - 1).rev() {
            for inside in 0..2 {
                for r in 0..=max_len {
                    let stay = Self::step(&table, idx, i + 1, inside, r);
                    let toggle = log_eta[i] + Self::step(&table, idx, i + 1, 1 - inside, r);
                    table[idx(i, inside, r)] = log_add(stay, toggle);
                }
            }
        }
        ConditionalSampler { window, max_len, log_eta, table }
    }

    fn step(
        table: &[f64],
        idx: impl Fn(usize, usize, usize) -> usize,
        next: usize,
        inside: usize,
        r: usize,
    ) -> f64 {
        if inside == 1 {
            if r == 0 {
                f64::NEG_INFINITY
            } else {
                table[idx(next, 1, r - 1)]
            }
        } else {
            table[idx(next, 0, r)]
        }
    }

    fn index(&self, i: usize, inside: usize, r: usize) -> usize {
        i * 2 * (self.max_len + 1) + inside * (self.max_len + 1) + r
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// `ln sum_{S in A_{n,W}} weight(S)`.
    pub fn log_total(&self, n: usize) -> f64 {
        if n > self.max_len {
            return f64::NEG_INFINITY;
        }
        self.table[self.index(0, 0, n)]
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<IntegerSubset> {
        if self.log_total(n) == f64::NEG_INFINITY {
            return Err(Error::argument(format!(
                "no subset of [0, {}] has length {n}",
                self.window
            )));
        }
        let last = self.window as usize;
        let idx = |i, inside, r| self.index(i, inside, r);
        let mut boundary = Vec::new();
        let (mut inside, mut r) = (0usize, n);
        for i in 0..last {
            let here = self.table[idx(i, inside, r)];
            let toggle = self.log_eta[i] + Self::step(&self.table, idx, i + 1, 1 - inside, r);
            let u: f64 = rng.random();
            if u < libm::exp(toggle - here) {
                boundary.push(i as u64);
                inside = 1 - inside;
            }
            if inside == 1 {
                r -= 1;
            }
        }
        if inside == 1 {
            boundary.push(last as u64);
        }
        IntegerSubset::from_boundary(&boundary)
    }
}

/// Exact sampler for the Boltzmann law of the truncated model: subsets of
/// `[0, M]` with `|S| <= N`, probability proportional to
/// `weight(S) x^|S|`.
#[derive(Debug, Clone)]
pub struct TruncatedSampler {
    size_cdf: Vec<f64>,
    conditional: ConditionalSampler,
}

impl TruncatedSampler {
    pub fn new(params: &ModelParams) -> Self {
        let beta = params.beta_f64();
        let max_len = params.max_size().min(params.window()) as usize;
        let conditional = ConditionalSampler::new(beta, params.window(), max_len);
        let ln_x = if params.x_f64() > 0.0 { libm::log(params.x_f64()) } else { f64::NEG_INFINITY };
        let logs: Vec<f64> = (0..=max_len)
            .map(|n| {
                let lx = if n == 0 { 0.0 } else { n as f64 * ln_x };
                conditional.log_total(n) + lx
            })
            .collect();
        let norm = logs.iter().fold(f64::NEG_INFINITY, |acc, &l| log_add(acc, l));
        let mut cdf = 0.0;
        let size_cdf = logs
            .iter()
            .map(|l| {
                cdf += libm::exp(l - norm);
                cdf
            })
            .collect();
        TruncatedSampler { size_cdf, conditional }
    }

    /// `P(|S| = n)` under the truncated law.
    pub fn size_probability(&self, n: usize) -> f64 {
        match n {
            0 => self.size_cdf.first().copied().unwrap_or(0.0),
            _ if n < self.size_cdf.len() => self.size_cdf[n] - self.size_cdf[n - 1],
            _ => 0.0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> IntegerSubset {
        let u: f64 = rng.random::<f64>() * self.size_cdf.last().copied().unwrap_or(1.0);
        let n = self.size_cdf.iter().position(|&c| u < c).unwrap_or(self.size_cdf.len() - 1);
        // every size up to min(N, M) is realisable in the window
        self.conditional.sample(n, rng).unwrap_or_default()
    }
}

/// Sampler for the untruncated measure: size from the negative binomial law,
/// then a subset from a window `W >= M` large enough that the relative mass
/// of `A_n` missing from `[0, W]` is at most `tail_tol`.
#[derive(Debug, Clone)]
pub struct MeasureSampler {
    beta: f64,
    x: f64,
    base_window: u64,
    tail_tol: f64,
    by_size: BTreeMap<u64, ConditionalSampler>,
}

impl MeasureSampler {
    pub fn new(params: &ModelParams, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(Error::argument("tail tolerance must be positive"));
        }
        Ok(MeasureSampler {
            beta: params.beta_f64(),
            x: params.x_f64(),
            base_window: params.window(),
            tail_tol,
            by_size: BTreeMap::new(),
        })
    }

    /// Smallest window `W = M 2^k` with relative truncation deficit
    /// `1 - lhs(n, W) / binom(1/beta + n - 1, n) <= tail_tol`.
    pub fn window_for(&self, n: u64) -> Result<u64> {
        let mut rhs = 1.0;
        for j in 0..n {
            rhs *= (1.0 / self.beta + j as f64) / (j as f64 + 1.0);
        }
        let mut window = self.base_window.max(n);
        loop {
            let lhs = lhs_partial_sums_f64(n as usize, window, self.beta)[n as usize];
            if 1.0 - lhs / rhs <= self.tail_tol {
                return Ok(window);
            }
            if window >= MAX_WINDOW {
                return Err(Error::Truncation(format!(
                    "size {n}: relative deficit {:.3e} > {:.3e} at window {window}",
                    1.0 - lhs / rhs,
                    self.tail_tol
                )));
            }
            window = (2 * window).min(MAX_WINDOW);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<IntegerSubset> {
        let n = draw_size(self.beta, self.x, rng);
        if n == 0 {
            return Ok(IntegerSubset::empty());
        }
        if !self.by_size.contains_key(&n) {
            let window = self.window_for(n)?;
            self.by_size.insert(n, ConditionalSampler::new(self.beta, window, n as usize));
        }
        self.by_size[&n].sample(n as usize, rng)
    }
}

/// One draw from the measure `(1 - x)^(1/beta) weight(S) x^|S|`, with the
/// window enlarged until the truncation deficit is at most `tail_tol`.
pub fn sample_subset<R: Rng + ?Sized>(
    params: &ModelParams,
    tail_tol: f64,
    rng: &mut R,
) -> Result<IntegerSubset> {
    MeasureSampler::new(params, tail_tol)?.sample(rng)
}
