use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{LaurentMatrix, TruncatedSeries, VerblunskySequence};
use crate::error::{Error, Result};

/// Monic orthogonal polynomials `p_0..p_N` and reversed polynomials
/// `r_n(z) = z^n p_n^*(z)`, as coefficient lists in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SzegoPolynomials {
    pub p: Vec<Vec<Complex64>>,
    pub r: Vec<Vec<Complex64>>,
}

/// `p_n = z p_{n-1} + alpha_n^* r_{n-1}` and `r_n = r_{n-1} + alpha_n z p_{n-1}`.
pub fn szego_recursion(alphas: &VerblunskySequence) -> SzegoPolynomials {
    let one = Complex64::new(1.0, 0.0);
    let mut p = vec![vec![one]];
    let mut r = vec![vec![one]];
    for (idx, &a) in alphas.as_slice().iter().enumerate() {
        let n = idx + 1;
        let (pp, rp) = (&p[idx], &r[idx]);
        let mut pn = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut rn = vec![Complex64::new(0.0, 0.0); n + 1];
        for d in 0..n {
            pn[d + 1] += pp[d];
            pn[d] += a.conj() * rp[d];
            rn[d] += rp[d];
            rn[d + 1] += a * pp[d];
        }
        p.push(pn);
        r.push(rn);
    }
    SzegoPolynomials { p, r }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// The approximant `prod_{n<=N} (1 - |alpha_n|^2) / |p_N(e^(i theta))|^2`
/// on a uniform grid, and its normalised integral `int w dtheta/(2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureDensity {
    pub theta: Vec<f64>,
    pub density: Vec<f64>,
    pub integral: f64,
}

pub fn measure_density(alphas: &VerblunskySequence, grid: usize) -> Result<MeasureDensity> {
    if grid < 16 {
        return Err(Error::argument(format!("grid must have at least 16 points, got {grid}")));
    }
    let polys = szego_recursion(alphas);
    let p_n = polys.p.last().map(Vec::as_slice).unwrap_or(&[]);
    let mass: f64 = alphas.as_slice().iter().map(|a| 1.0 - a.norm_sqr()).product();
    let step = 2.0 * core::f64::consts::PI / grid as f64;
    let theta: Vec<f64> = (0..grid).map(|m| m as f64 * step).collect();
    let density: Vec<f64> = theta
        .iter()
        .map(|&t| mass / horner(p_n, Complex64::from_polar(1.0, t)).norm_sqr())
        .collect();
    // periodic trapezoid rule
    let integral = density.iter().sum::<f64>() / grid as f64;
    Ok(MeasureDensity { theta, density, integral })
}

fn check_length(alphas: &VerblunskySequence, n_max: usize) -> Result<()> {
    if n_max > alphas.len() {
        return Err(Error::argument(format!(
            "need at least {n_max} Verblunsky coefficients, got {}",
            alphas.len()
        )));
    }
    Ok(())
}

/// `1 + sum_k xhat_k z^k`: the bottom row sum `gamma + delta` of the ordered
/// product `prod_{j=k}^{1} [[1, alpha_j^* z^(-j)], [alpha_j z^j, 1]]`, read
/// to degree `n_max`. Forms the full Laurent product.
pub fn xhat_series(alphas: &VerblunskySequence, n_max: usize) -> Result<TruncatedSeries<Complex64>> {
    check_length(alphas, n_max)?;
    let k = alphas.len();
    let radius = k * (k + 1) / 2;
    let mut product = LaurentMatrix::<Complex64>::identity(radius);
    for (idx, &a) in alphas.as_slice().iter().enumerate() {
        product = product.left_mul_elementary(idx + 1, &a, &a.conj());
    }
    let coeffs = (0..=n_max as i64)
        .map(|d| product.coeff(1, 0, d) + product.coeff(1, 1, d))
        .collect();
    Ok(TruncatedSeries::new(coeffs, n_max))
}

/// Same coefficients as [`xhat_series`], through the Szego recursion
/// truncated at degree `n_max` (exact for those coefficients, since both
/// recursions only raise degrees). Costs `O(k n_max)`.
pub fn xhat_series_szego(
    alphas: &VerblunskySequence,
    n_max: usize,
) -> Result<TruncatedSeries<Complex64>> {
    check_length(alphas, n_max)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut p = vec![zero; n_max + 1];
    let mut r = vec![zero; n_max + 1];
    p[0] = Complex64::new(1.0, 0.0);
    r[0] = p[0];
    let mut next_p = p.clone();
    for &a in alphas.as_slice() {
        let ac = a.conj();
        next_p[0] = ac * r[0];
        for d in 1..=n_max {
            next_p[d] = p[d - 1] + ac * r[d];
        }
        for d in (1..=n_max).rev() {
            r[d] += a * p[d - 1];
        }
        core::mem::swap(&mut p, &mut next_p);
    }
    Ok(TruncatedSeries::new(r, n_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(v: &[Complex64]) -> VerblunskySequence {
        VerblunskySequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn one_step() {
        let a = c(0.3, -0.4);
        let polys = szego_recursion(&seq(&[a]));
        assert_eq!(polys.p[1], vec![a.conj(), c(1.0, 0.0)]);
        assert_eq!(polys.r[1], vec![c(1.0, 0.0), a]);
    }

    #[test]
    fn zero_sequence_gives_monomials() {
        let polys = szego_recursion(&VerblunskySequence::zeros(5));
        for (n, p) in polys.p.iter().enumerate() {
            for (d, coeff) in p.iter().enumerate() {
                assert_eq!(*coeff, c(if d == n { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let density = measure_density(&VerblunskySequence::zeros(5), 64).unwrap();
        assert!(density.density.iter().all(|&w| (w - 1.0).abs() < 1e-13));
    }

    #[test]
    fn monic_reversal_and_normalisation() {
        let alphas = seq(&[c(0.5, 0.1), c(-0.2, 0.6), c(0.0, -0.7), c(0.3, 0.3)]);
        let polys = szego_recursion(&alphas);
        for n in 0..=4 {
            assert_eq!(polys.p[n].len(), n + 1);
            assert_eq!(polys.p[n][n], c(1.0, 0.0));
            assert_eq!(polys.r[n][0], c(1.0, 0.0));
            // r_n = z^n p_n^*: coefficients reversed and conjugated
            for d in 0..=n {
                assert!((polys.r[n][d] - polys.p[n][n - d].conj()).norm() < 1e-14);
            }
        }
        let density = measure_density(&alphas, 4096).unwrap();
        assert!((density.integral - 1.0).abs() < 1e-6);
        assert!(measure_density(&alphas, 8).is_err());
    }

    #[test]
    fn single_coefficient_density() {
        let d = measure_density(&seq(&[c(0.5, 0.0)]), 32).unwrap();
        for (&t, &w) in d.theta.iter().zip(&d.density) {
            let expected = 0.75 / (Complex64::from_polar(1.0, t) + 0.5).norm_sqr();
            assert!((w - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn xhat_small_products() {
        let (a1, a2) = (c(0.3, 0.2), c(-0.1, 0.5));
        let x = xhat_series(&seq(&[a1]), 1).unwrap();
        assert_eq!(x.coeff(0), c(1.0, 0.0));
        assert_eq!(x.coeff(1), a1);
        let x = xhat_series(&seq(&[a1, a2]), 2).unwrap();
        assert!((x.coeff(1) - (a1 + a2 * a1.conj())).norm() < 1e-15);
        assert!((x.coeff(2) - a2).norm() < 1e-15);
        let zero = xhat_series(&VerblunskySequence::zeros(4), 3).unwrap();
        assert_eq!(zero, TruncatedSeries::one(3));
        assert!(xhat_series(&seq(&[a1]), 2).is_err());
    }

    #[test]
    fn szego_path_matches_laurent_product() {
        let alphas = seq(&[
            c(0.3, 0.2),
            c(-0.1, 0.5),
            c(0.4, -0.4),
            c(0.05, 0.1),
            c(-0.6, 0.0),
            c(0.2, 0.7),
            c(0.0, -0.3),
        ]);
        let full = xhat_series(&alphas, 5).unwrap();
        let fast = xhat_series_szego(&alphas, 5).unwrap();
        for d in 0..=5 {
            assert!((full.coeff(d) - fast.coeff(d)).norm() < 1e-13, "degree {d}");
        }
        // with n_max = k the truncated recursion reproduces r_k itself
        let polys = szego_recursion(&alphas);
        let fast = xhat_series_szego(&alphas, 7).unwrap();
        for d in 0..=7 {
            assert!((polys.r[7][d] - fast.coeff(d)).norm() < 1e-13);
        }
    }
}
