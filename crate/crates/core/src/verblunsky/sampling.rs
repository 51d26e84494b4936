use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{exp_series, xhat_series_szego, ExpSign, TruncatedSeries, VerblunskySequence};
use crate::error::{Error, Result};
use crate::lattice::neumaier_sum;
use crate::telescoping::lhs_partial_sums_f64;

const MIN_SAMPLES: usize = 1000;
/// Relative truncation bias allowed when `mc_variance` picks `k_max`.
const XHAT_TAIL: f64 = 1e-3;
const MAX_XHAT_LENGTH: usize = 1 << 16;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::argument(format!("beta must be a positive real, got {beta}")));
    }
    Ok(())
}

/// One draw of `f_n`: rotation-invariant complex Gaussian, `E|f_n|^2 = 1/(n beta)`.
pub fn gff_coefficient<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Complex64 {
    let scale = libm::sqrt(1.0 / (2.0 * n as f64 * beta));
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// `f_1..f_N`, independent.
pub fn sample_gff<R: Rng + ?Sized>(beta: f64, len: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    check_beta(beta)?;
    Ok((1..=len).map(|n| gff_coefficient(n, beta, rng)).collect())
}

/// One draw of `alpha_n` with density `(n beta/pi)(1 - |alpha|^2)^(n beta - 1)`,
/// so `|alpha|^2 = 1 - exp(-E/(n beta))` with `E ~ Exp(1)` and uniform phase.
/// A standard complex Gaussian `g` supplies both: `g/|g|` is uniform on the
/// circle and independent of `|g|^2/2 ~ Exp(1)`.
pub fn verblunsky_coefficient<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = re * re + im * im;
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut r2 = -libm::expm1(-s / (2.0 * n as f64 * beta));
    if r2 >= 1.0 {
        r2 = 1.0 - f64::EPSILON;
    }
    let scale = libm::sqrt(r2 / s);
    Complex64::new(re * scale, im * scale)
}

pub fn sample_verblunsky<R: Rng + ?Sized>(
    beta: f64,
    len: usize,
    rng: &mut R,
) -> Result<VerblunskySequence> {
    check_beta(beta)?;
    VerblunskySequence::new((1..=len).map(|n| verblunsky_coefficient(n, beta, rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceTarget {
    /// `x_n` from `e^(-f) = 1 + sum x_n z^n`.
    X,
    /// `xhat_n` from the Verblunsky loop product.
    Xhat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McVariance {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Number of Verblunsky factors (0 for the free-field route).
    pub k_max: usize,
    /// `binom(1/beta + n - 1, n) - sum_{S in A_{n,k_max}} weight(S)`: the
    /// exact bias of the truncated product (0 for the free-field route).
    pub tail: f64,
}

fn rhs_f64(n: usize, beta: f64) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (1.0 / beta + j as f64) / (j as f64 + 1.0))
}

/// Smallest `k = 4n 2^m` whose truncation tail is at most `XHAT_TAIL`
/// times the full variance.
fn xhat_length(n: usize, beta: f64) -> Result<(usize, f64)> {
    let rhs = rhs_f64(n, beta);
    let mut k = (4 * n).max(1);
    loop {
        let tail = rhs - lhs_partial_sums_f64(n, k as u64, beta)[n];
        if tail <= XHAT_TAIL * rhs {
            return Ok((k, tail));
        }
        if k >= MAX_XHAT_LENGTH {
            return Err(Error::Truncation(format!(
                "xhat_{n}: tail {tail:.3e} above {:.1e} of the variance at k = {k}",
                XHAT_TAIL
            )));
        }
        k *= 2;
    }
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = neumaier_sum(values.iter().copied()) / count;
    let var = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (count - 1.0);
    (mean, libm::sqrt(var / count))
}

/// Monte Carlo estimate of `E|x_n|^2` or `E|xhat_n|^2`. For `xhat` the
/// product length `k_max` is the first `4n 2^m` whose exact truncation bias
/// is at most `1e-3` of the variance; pass `k_max` to override.
pub fn mc_variance(
    target: VarianceTarget,
    n: usize,
    beta: f64,
    samples: usize,
    seed: u64,
    k_max: Option<usize>,
) -> Result<McVariance> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::argument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    let (k, tail) = match target {
        VarianceTarget::X => {
            for _ in 0..samples {
                let mut coeffs = sample_gff(beta, n, &mut rng)?;
                coeffs.insert(0, Complex64::new(0.0, 0.0));
                let x = exp_series(&TruncatedSeries::new(coeffs, n), ExpSign::Minus)?;
                values.push(x.coeff(n).norm_sqr());
            }
            (0, 0.0)
        }
        VarianceTarget::Xhat => {
            let (k, tail) = match k_max {
                Some(k) if k < n => {
                    return Err(Error::argument(format!("k_max = {k} is smaller than n = {n}")))
                }
                Some(k) => (k, rhs_f64(n, beta) - lhs_partial_sums_f64(n, k as u64, beta)[n]),
                None => xhat_length(n, beta)?,
            };
            for _ in 0..samples {
                let alphas = sample_verblunsky(beta, k, &mut rng)?;
                values.push(xhat_series_szego(&alphas, n)?.coeff(n).norm_sqr());
            }
            (k, tail)
        }
    };
    let (estimate, stderr) = mean_and_stderr(&values);
    Ok(McVariance { estimate, stderr, samples, k_max: k, tail })
}

/// Monte Carlo check that `E[e^(-n |f_n|^2)]` and `E[(1 - |alpha_n|^2)^n]`
/// both equal `beta / (beta + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SzegoMeanReport {
    pub n: usize,
    pub beta: f64,
    pub expected: f64,
    pub gff_estimate: f64,
    pub gff_stderr: f64,
    pub verblunsky_estimate: f64,
    pub verblunsky_stderr: f64,
    pub pass: bool,
}

pub fn szego_mean_check(n: usize, beta: f64, samples: usize, seed: u64) -> Result<SzegoMeanReport> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::argument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf = n as f64;
    let gff: Vec<f64> = (0..samples)
        .map(|_| libm::exp(-nf * gff_coefficient(n, beta, &mut rng).norm_sqr()))
        .collect();
    let verb: Vec<f64> = (0..samples)
        .map(|_| libm::pow(1.0 - verblunsky_coefficient(n, beta, &mut rng).norm_sqr(), nf))
        .collect();
    let expected = beta / (beta + 1.0);
    let (gff_estimate, gff_stderr) = mean_and_stderr(&gff);
    let (verblunsky_estimate, verblunsky_stderr) = mean_and_stderr(&verb);
    let pass = (gff_estimate - expected).abs() <= 3.0 * gff_stderr
        && (verblunsky_estimate - expected).abs() <= 3.0 * verblunsky_stderr;
    Ok(SzegoMeanReport {
        n,
        beta,
        expected,
        gff_estimate,
        gff_stderr,
        verblunsky_estimate,
        verblunsky_stderr,
        pass,
    })
}
