use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::{coupling, ModelParams};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subsets::IntegerSubset;
use crate::telescoping::Beta;

/// Occupied sites (`sigma(i) = 1`) of a finitely supported binary
/// configuration. Sites are positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinConfiguration {
    occupied: BTreeSet<u64>,
}

impl SpinConfiguration {
    pub fn new(sites: impl IntoIterator<Item = u64>) -> Result<Self> {
        let occupied: BTreeSet<u64> = sites.into_iter().collect();
        if occupied.contains(&0) {
            return Err(Error::argument("site 0 cannot be occupied"));
        }
        Ok(SpinConfiguration { occupied })
    }

    pub fn empty() -> Self {
        SpinConfiguration::default()
    }

    pub fn occupied(&self) -> &BTreeSet<u64> {
        &self.occupied
    }

    pub fn sigma(&self, i: u64) -> u8 {
        self.occupied.contains(&i) as u8
    }

    /// `d sigma(i) = sigma(i + 1) - sigma(i)`.
    pub fn gradient(&self, i: u64) -> i8 {
        self.sigma(i + 1) as i8 - self.sigma(i) as i8
    }

    pub fn size(&self) -> u64 {
        self.occupied.len() as u64
    }

    /// The points `i` with `d sigma(i) != 0`, increasing.
    pub fn jump_points(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut prev: Option<u64> = None;
        for &site in &self.occupied {
            match prev {
                Some(p) if p + 1 == site => {}
                Some(p) => {
                    out.push(p);
                    out.push(site - 1);
                }
                None => out.push(site - 1),
            }
            prev = Some(site);
        }
        if let Some(p) = prev {
            out.push(p);
        }
        out
    }
}

/// `sigma_S(i) = 1` iff `i in (a_j, b_j]`.
pub fn config_from_subset(set: &IntegerSubset) -> SpinConfiguration {
    let occupied = set
        .intervals()
        .iter()
        .flat_map(|iv| iv.start() + 1..=iv.end())
        .collect();
    SpinConfiguration { occupied }
}

pub fn subset_from_config(config: &SpinConfiguration) -> IntegerSubset {
    let jumps = config.jump_points();
    // jump points of a finite configuration alternate open/close and are
    // strictly increasing
    IntegerSubset::from_boundary(&jumps).unwrap_or_default()
}

/// `H(sigma) = - sum_i J_i(beta) (d sigma(i))^2 - mu sum_i sigma(i)`.
pub fn energy(config: &SpinConfiguration, params: &ModelParams) -> f64 {
    let beta = params.beta_f64();
    let gradient: f64 = config.jump_points().iter().map(|&i| coupling(i, beta)).sum();
    let chemical = if config.size() == 0 { 0.0 } else { params.mu() * config.size() as f64 };
    -gradient - chemical
}

/// `exp(-beta H(sigma))` in binary64.
pub fn boltzmann_weight(config: &SpinConfiguration, params: &ModelParams) -> f64 {
    libm::exp(-params.beta_f64() * energy(config, params))
}

/// `prod_i (1/(1 + i beta))^|d sigma(i)| * x^(sum sigma)`, exactly.
pub fn boltzmann_weight_exact(
    config: &SpinConfiguration,
    beta: &Beta,
    x: &Rational,
) -> Result<Rational> {
    let mut w = Pow::pow(x, config.size() as u32);
    for i in config.jump_points() {
        w *= beta.eta(i)?;
    }
    Ok(w)
}

/// One binary configuration per species; species `k >= 1` is labelled by
/// the `k`-th prime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VectorConfiguration {
    species: BTreeMap<usize, SpinConfiguration>,
}

impl VectorConfiguration {
    pub fn new(species: impl IntoIterator<Item = (usize, SpinConfiguration)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, config) in species {
            if k == 0 {
                return Err(Error::argument("species are indexed from 1"));
            }
            if config.size() > 0 {
                map.insert(k, config);
            }
        }
        Ok(VectorConfiguration { species: map })
    }

    pub fn species(&self) -> &BTreeMap<usize, SpinConfiguration> {
        &self.species
    }

    fn jump_counts(&self) -> BTreeMap<u64, u32> {
        let mut counts = BTreeMap::new();
        for config in self.species.values() {
            for i in config.jump_points() {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// `H = - sum_i J_i(beta) grad sigma(i) . grad sigma(i) - sum_i mu . sigma(i)`
/// with `mu[k - 1]` the chemical potential of species `k`.
pub fn vector_energy(config: &VectorConfiguration, beta: f64, mu: &[f64]) -> Result<f64> {
    let gradient: f64 = config
        .jump_counts()
        .iter()
        .map(|(&i, &c)| coupling(i, beta) * c as f64)
        .sum();
    let mut chemical = 0.0;
    for (&k, s) in config.species() {
        let m = *mu
            .get(k - 1)
            .ok_or_else(|| Error::argument("missing chemical potential for species"))?;
        chemical += m * s.size() as f64;
    }
    Ok(-gradient - chemical)
}

/// Exact `exp(-beta H)` of the vector model site by site, with fugacities
/// `xs[k - 1] = e^(beta mu_k)`.
pub fn vector_boltzmann_weight_exact(
    config: &VectorConfiguration,
    beta: &Beta,
    xs: &[Rational],
) -> Result<Rational> {
    let mut w = Rational::one();
    for (i, c) in config.jump_counts() {
        w *= Pow::pow(beta.eta(i)?, c);
    }
    for (&k, s) in config.species() {
        let x = xs
            .get(k - 1)
            .ok_or_else(|| Error::argument("missing fugacity for species"))?;
        w *= Pow::pow(x, s.size() as u32);
    }
    Ok(w)
}

/// `f(i) = prod_k p_k^(sigma_k(i))`, stored on its support (`f = 1`
/// elsewhere).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegerFunction {
    values: BTreeMap<u64, BigUint>,
}

impl IntegerFunction {
    pub fn value(&self, i: u64) -> BigUint {
        self.values.get(&i).cloned().unwrap_or_else(BigUint::one)
    }

    pub fn support(&self) -> &BTreeMap<u64, BigUint> {
        &self.values
    }
}

pub fn random_integer_function(config: &VectorConfiguration) -> IntegerFunction {
    let species_needed = config.species().keys().next_back().copied().unwrap_or(0);
    let primes = super::primes(species_needed);
    let mut values: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (&k, s) in config.species() {
        for &site in s.occupied() {
            let v = values.entry(site).or_insert_with(BigUint::one);
            *v *= primes[k - 1];
        }
    }
    IntegerFunction { values }
}
