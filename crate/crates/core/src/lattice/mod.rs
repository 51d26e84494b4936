//! The binary lattice gas on the nonnegative integers with
//! temperature-dependent couplings
//!
//! ```text
//!   H(sigma) = - sum_i J_i(beta) (d sigma(i))^2 - mu sum_i sigma(i),
//!   J_i(beta) = -ln(1 + i beta) / beta,
//! ```
//!
//! whose Boltzmann weights are exactly the telescoping weights times
//! `x^|S|` with `x = e^(beta mu)`, so `Z = (1 - x)^(-1/beta)`. One independent
//! copy per prime with `mu_k = -ln p_k` gives `Z = zeta(beta)^(1/beta)`.
//!
//! Subsets and spin configurations correspond through the half-open
//! convention: `sigma(i) = 1` iff `i` lies in `(a_j, b_j]` for a component
//! `[a_j, b_j]`. Under it `sum sigma = |S|` and `d sigma(i) != 0` exactly on
//! the boundary `dS`.

mod config;
mod mcmc;
mod partition;
mod primes;
mod sampler;

pub use config::{
    boltzmann_weight, boltzmann_weight_exact, config_from_subset, energy, random_integer_function,
    subset_from_config, vector_boltzmann_weight_exact, vector_energy, IntegerFunction,
    SpinConfiguration, VectorConfiguration,
};
pub use mcmc::{mcmc_sampler, McmcStream, MetropolisChain};
pub use partition::{
    neumaier_sum, partition_scalar, partition_vector_truncated, partition_zeta, truncated_law,
    ScalarPartition,
    ZetaPartition,
};
pub use primes::{nth_prime_bound, primes, zeta_reference};
pub use sampler::{
    sample_size, sample_subset, size_quantile_cap, ConditionalSampler, MeasureSampler,
    TruncatedSampler,
};

use alloc::format;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::telescoping::Beta;

/// `J_i(beta) = -ln(1 + i beta) / beta`. At `beta = 0` returns the limiting
/// rate `-i`.
pub fn coupling(i: u64, beta: f64) -> f64 {
    if beta == 0.0 {
        return -(i as f64);
    }
    -libm::log1p(i as f64 * beta) / beta
}

/// Inverse temperature `beta > 0`, fugacity `x = e^(beta mu)` in `[0, 1)`,
/// window `[0, M]` and size cap `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    beta: Beta,
    x: Rational,
    window: u64,
    max_size: u64,
}

impl ModelParams {
    pub fn new(beta: Beta, x: Rational, window: u64, max_size: u64) -> Result<Self> {
        if !beta.is_positive() {
            return Err(Error::argument("inverse temperature beta must be positive"));
        }
        if x.is_negative() {
            return Err(Error::argument("fugacity x must be nonnegative"));
        }
        if x >= Rational::one() {
            return Err(Error::Divergence(format!(
                "x = {} >= 1: the partition function diverges",
                rational::to_string(&x)
            )));
        }
        if window == 0 {
            return Err(Error::argument("window M must be at least 1"));
        }
        Ok(ModelParams { beta, x, window, max_size })
    }

    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn max_size(&self) -> u64 {
        self.max_size
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64()
    }

    pub fn x_f64(&self) -> f64 {
        rational::to_f64(&self.x)
    }

    /// Chemical potential `mu = ln(x) / beta` (negative; `-inf` at `x = 0`).
    pub fn mu(&self) -> f64 {
        if self.x.is_zero() {
            return f64::NEG_INFINITY;
        }
        libm::log(self.x_f64()) / self.beta_f64()
    }
}
