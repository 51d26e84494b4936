//! Free-field coefficients, Verblunsky sequences and the loop-group
//! products behind the variance identity `E|x_n|^2 = E|xhat_n|^2`.

mod laurent;
mod moments;
mod sampling;
mod series;
mod szego;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use laurent::{LaurentMatrix, Ring};
pub use moments::{
    alpha_moment, loop_product_real, moment_partition_sum, multiindex_moment,
    xhat_variance_exact, MultiIndex, MultiIndexMoment, MAX_MULTIINDEX_DEGREE,
    MAX_SYMBOLIC_LENGTH,
};
pub use sampling::{
    gff_coefficient, mc_variance, sample_gff, sample_verblunsky, szego_mean_check,
    verblunsky_coefficient, McVariance, SzegoMeanReport, VarianceTarget,
};
pub use series::{exp_series, ExpSign, Scalar, TruncatedSeries};
pub use szego::{
    measure_density, szego_recursion, xhat_series, xhat_series_szego, MeasureDensity,
    SzegoPolynomials,
};

/// `alpha_1, ..., alpha_N`, each strictly inside the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskySequence {
    alphas: Vec<Complex64>,
}

impl VerblunskySequence {
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        if let Some((j, a)) = alphas.iter().enumerate().find(|(_, a)| !(a.norm_sqr() < 1.0)) {
            return Err(Error::argument(format!(
                "alpha_{} = {a} is not inside the unit disk",
                j + 1
            )));
        }
        Ok(VerblunskySequence { alphas })
    }

    pub fn zeros(len: usize) -> Self {
        VerblunskySequence { alphas: alloc::vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `alpha_j` for `1 <= j <= len`.
    pub fn alpha(&self, j: usize) -> Complex64 {
        self.alphas[j - 1]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.alphas
    }
}
