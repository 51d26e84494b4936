use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Pow, Zero};

use super::{primes, zeta_reference, ModelParams};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subsets::for_each_in_family;
use crate::subsets::IntegerSubset;
use crate::telescoping::{lhs_partial_sums, weight, Beta};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPartition {
    /// `sum_{n <= N} sum_{S in A_{n,M}} weight(S) x^n`, exactly.
    pub truncated_exact: Rational,
    pub truncated: f64,
    /// `(1 - x)^(-1/beta)`.
    pub closed_form: f64,
    pub gap: f64,
}

pub fn partition_scalar(params: &ModelParams) -> Result<ScalarPartition> {
    let truncated_exact = truncated_partition(
        params.beta(),
        params.x(),
        params.max_size() as usize,
        params.window(),
    )?;
    let truncated = rational::to_f64(&truncated_exact);
    let closed_form = libm::pow(1.0 - params.x_f64(), -1.0 / params.beta_f64());
    Ok(ScalarPartition { truncated_exact, truncated, closed_form, gap: (truncated - closed_form).abs() })
}

fn truncated_partition(beta: &Beta, x: &Rational, max_size: usize, window: u64) -> Result<Rational> {
    let sums = lhs_partial_sums(max_size, window, beta)?;
    let mut total = Rational::zero();
    let mut power = Rational::one();
    for c in &sums {
        total += c * &power;
        power *= x;
    }
    Ok(total)
}

/// Truncated partition function of independent species with fugacities
/// `xs`: the product of the per-species scalar truncations.
pub fn partition_vector_truncated(
    beta: &Beta,
    xs: &[Rational],
    max_size: usize,
    window: u64,
) -> Result<Rational> {
    xs.iter().try_fold(Rational::one(), |acc, x| {
        Ok(acc * truncated_partition(beta, x, max_size, window)?)
    })
}

/// The Boltzmann law of the truncated scalar model (subsets of `[0, M]`
/// with `|S| <= N`) by enumeration, with exact probabilities.
pub fn truncated_law(params: &ModelParams) -> Result<Vec<(IntegerSubset, Rational)>> {
    let mut cells = Vec::new();
    let mut failure = None;
    for n in 0..=params.max_size() {
        let xn = Pow::pow(params.x(), n as u32);
        for_each_in_family(n, params.window(), |set| match weight(set, params.beta()) {
            Ok(w) => cells.push((set.clone(), w * &xn)),
            Err(e) => failure = Some(e),
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let total = cells.iter().fold(Rational::zero(), |acc, (_, w)| acc + w);
    for (_, w) in cells.iter_mut() {
        *w = &*w / &total;
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaPartition {
    /// `prod_{k <= K} sum_{n <= N} sum_{S in A_{n,M}} weight(S) p_k^(-beta n)`.
    pub truncated: f64,
    /// `zeta(beta)^(1/beta)`.
    pub reference: f64,
    pub gap: f64,
    pub largest_prime: u64,
}

/// Prime-species partition function truncated to `K` species, sizes `<= N`
/// and window `[0, M]`, against `zeta(beta)^(1/beta)`.
pub fn partition_zeta(beta: f64, species: usize, max_size: usize, window: u64) -> Result<ZetaPartition> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::Divergence(format!(
            "zeta partition function needs beta > 1, got {beta}"
        )));
    }
    if species == 0 {
        return Err(Error::argument("need at least one prime species"));
    }
    let exact_beta = Beta::new(rational::from_f64(beta)?)?;
    let coeffs: Vec<f64> = lhs_partial_sums(max_size, window, &exact_beta)?
        .iter()
        .map(rational::to_f64)
        .collect();
    let ps = primes(species);
    let mut log_product = 0.0;
    for &p in &ps {
        let x = libm::pow(p as f64, -beta);
        let mut power = 1.0;
        let terms = coeffs.iter().map(|c| {
            let t = c * power;
            power *= x;
            t
        });
        log_product += libm::log(neumaier_sum(terms));
    }
    let truncated = libm::exp(log_product);
    let reference = libm::pow(zeta_reference(beta), 1.0 / beta);
    Ok(ZetaPartition {
        truncated,
        reference,
        gap: (truncated - reference).abs(),
        largest_prime: ps.last().copied().unwrap_or(0),
    })
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}
