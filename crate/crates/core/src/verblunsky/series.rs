use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Coefficient field for series: exact rationals, `f64` or `Complex64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_u64(n: u64) -> Self;
    fn conj(&self) -> Self;
}

impl Scalar for f64 {
    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn conj(&self) -> Self {
        *self
    }
}

impl Scalar for Complex64 {
    fn from_u64(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

impl Scalar for Rational {
    fn from_u64(n: u64) -> Self {
        rational::int(n as i64)
    }

    fn conj(&self) -> Self {
        self.clone()
    }
}

/// `c_0 + c_1 z + ... + c_N z^N`, with arithmetic truncated at degree `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// Pads with zeros or drops terms so that the truncation degree is
    /// `degree`.
    pub fn new(mut coeffs: Vec<T>, degree: usize) -> Self {
        coeffs.resize(degree + 1, T::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        TruncatedSeries { coeffs: vec![T::zero(); degree + 1] }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = T::one();
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let coeffs = (0..=degree).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect();
        TruncatedSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let mut coeffs = vec![T::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(degree + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(degree + 1 - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpSign {
    Plus,
    Minus,
}

/// Coefficients of `e^(f)` or `e^(-f)` to the truncation degree of `f`,
/// from `n g_n = +-sum_{k=1}^{n} k f_k g_{n-k}`.
pub fn exp_series<T: Scalar>(f: &TruncatedSeries<T>, sign: ExpSign) -> Result<TruncatedSeries<T>> {
    if !f.coeffs[0].is_zero() {
        return Err(Error::argument("exponential needs a series with zero constant term"));
    }
    let degree = f.degree();
    let mut g = vec![T::zero(); degree + 1];
    g[0] = T::one();
    for n in 1..=degree {
        let mut acc = T::zero();
        for k in 1..=n {
            acc = acc + T::from_u64(k as u64) * f.coeffs[k].clone() * g[n - k].clone();
        }
        let term = acc / T::from_u64(n as u64);
        g[n] = match sign {
            ExpSign::Plus => term,
            ExpSign::Minus => -term,
        };
    }
    Ok(TruncatedSeries { coeffs: g })
}
