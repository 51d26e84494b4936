use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{ModelParams, SpinConfiguration};

/// Single-site Metropolis chain on configurations supported in `[1, M]`
/// with at most `N` occupied sites. Starts from the empty configuration.
#[derive(Debug, Clone)]
pub struct MetropolisChain {
    // sites[i] = sigma(i) for 0 <= i <= M + 1; the ends stay empty
    sites: Vec<bool>,
    log_eta: Vec<f64>,
    log_x: f64,
    max_size: u64,
    size: u64,
    accepted: u64,
    steps: u64,
}

impl MetropolisChain {
    pub fn new(params: &ModelParams) -> Self {
        let m = params.window() as usize;
        let beta = params.beta_f64();
        let x = params.x_f64();
        MetropolisChain {
            sites: vec![false; m + 2],
            log_eta: (0..=m).map(|i| -libm::log1p(i as f64 * beta)).collect(),
            log_x: if x > 0.0 { libm::log(x) } else { f64::NEG_INFINITY },
            max_size: params.max_size(),
            size: 0,
            accepted: 0,
            steps: 0,
        }
    }

    fn window(&self) -> usize {
        self.sites.len() - 2
    }

    fn jump(&self, i: usize) -> bool {
        self.sites[i] != self.sites[i + 1]
    }

    /// `ln w(flipped) - ln w(current)` for flipping site `j`, i.e. `-beta dH`.
    fn log_ratio(&self, j: usize) -> f64 {
        let mut delta = 0.0;
        for i in [j - 1, j] {
            // flipping j toggles the jump at j - 1 and at j
            if self.jump(i) {
                delta -= self.log_eta[i];
            } else {
                delta += self.log_eta[i];
            }
        }
        if self.sites[j] {
            delta - self.log_x
        } else {
            delta + self.log_x
        }
    }

    /// One proposal: pick a site uniformly in `[1, M]` and flip it with
    /// probability `min(1, e^(-beta dH))`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.steps += 1;
        let j = rng.random_range(1..=self.window());
        let adding = !self.sites[j];
        if adding && (self.size >= self.max_size || self.log_x == f64::NEG_INFINITY) {
            return;
        }
        let log_ratio = self.log_ratio(j);
        if log_ratio >= 0.0 || rng.random::<f64>() < libm::exp(log_ratio) {
            self.sites[j] = adding;
            if adding {
                self.size += 1;
            } else {
                self.size -= 1;
            }
            self.accepted += 1;
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    pub fn occupied(&self) -> impl Iterator<Item = u64> + '_ {
        self.sites.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i as u64)
    }

    pub fn configuration(&self) -> SpinConfiguration {
        SpinConfiguration::new(self.occupied()).unwrap_or_default()
    }
}

/// The states visited by a [`MetropolisChain`], one per step.
#[derive(Debug)]
pub struct McmcStream<R> {
    chain: MetropolisChain,
    rng: R,
    remaining: u64,
}

impl<R> McmcStream<R> {
    pub fn metropolis(&self) -> &MetropolisChain {
        &self.chain
    }
}

impl<R: Rng> Iterator for McmcStream<R> {
    type Item = SpinConfiguration;

    fn next(&mut self) -> Option<SpinConfiguration> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        self.chain.step(&mut self.rng);
        Some(self.chain.configuration())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, usize::try_from(self.remaining).ok())
    }
}

pub fn mcmc_sampler<R: Rng>(params: &ModelParams, steps: u64, rng: R) -> McmcStream<R> {
    McmcStream { chain: MetropolisChain::new(params), rng, remaining: steps }
}
