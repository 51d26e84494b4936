use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_traits::{One, Zero};

/// Commutative ring of matrix-entry coefficients.
pub trait Ring: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Ring for T {}

/// 2x2 matrix of Laurent polynomials in `z`, each supported in degrees
/// `[-N, N]`. Products drop terms outside that range.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix<T> {
    radius: usize,
    // row-major; entries[r][c][N + d] is the coefficient of z^d
    entries: [[Vec<T>; 2]; 2],
}

impl<T: Ring> LaurentMatrix<T> {
    fn blank(radius: usize) -> Self {
        let zero = vec![T::zero(); 2 * radius + 1];
        LaurentMatrix {
            radius,
            entries: [[zero.clone(), zero.clone()], [zero.clone(), zero]],
        }
    }

    pub fn identity(radius: usize) -> Self {
        let mut m = Self::blank(radius);
        m.entries[0][0][radius] = T::one();
        m.entries[1][1][radius] = T::one();
        m
    }

    /// `[[1, upper z^(-j)], [lower z^j, 1]]`.
    pub fn elementary(radius: usize, j: usize, lower: T, upper: T) -> Self {
        let mut m = Self::identity(radius);
        if j <= radius {
            m.entries[0][1][radius - j] = upper;
            m.entries[1][0][radius + j] = lower;
        }
        m
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Coefficient of `z^degree` in entry `(row, col)`.
    pub fn coeff(&self, row: usize, col: usize, degree: i64) -> T {
        let idx = degree + self.radius as i64;
        if idx < 0 || idx > 2 * self.radius as i64 {
            return T::zero();
        }
        self.entries[row][col][idx as usize].clone()
    }

    pub fn entry(&self, row: usize, col: usize) -> &[T] {
        &self.entries[row][col]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let radius = self.radius.min(other.radius);
        let mut out = Self::blank(radius);
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    poly_mul_acc(
                        &mut out.entries[r][c],
                        radius,
                        &self.entries[r][k],
                        self.radius,
                        &other.entries[k][c],
                        other.radius,
                    );
                }
            }
        }
        out
    }

    /// `E_j * self` for the elementary factor `E_j = [[1, upper z^(-j)],
    /// [lower z^j, 1]]`, without forming `E_j`.
    pub fn left_mul_elementary(&self, j: usize, lower: &T, upper: &T) -> Self {
        let n = self.radius;
        let mut out = self.clone();
        for c in 0..2 {
            for idx in 0..=2 * n {
                // top row picks up upper * z^(-j) * bottom, bottom row lower * z^j * top
                if idx + j <= 2 * n {
                    let b = &self.entries[1][c][idx + j];
                    if !b.is_zero() {
                        out.entries[0][c][idx] = out.entries[0][c][idx].clone() + upper.clone() * b.clone();
                    }
                }
                if idx >= j {
                    let t = &self.entries[0][c][idx - j];
                    if !t.is_zero() {
                        out.entries[1][c][idx] = out.entries[1][c][idx].clone() + lower.clone() * t.clone();
                    }
                }
            }
        }
        out
    }
}

fn poly_mul_acc<T: Ring>(out: &mut [T], radius: usize, a: &[T], ra: usize, b: &[T], rb: usize) {
    let radius = radius as i64;
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let da = i as i64 - ra as i64;
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let d = da + j as i64 - rb as i64;
            if d.abs() <= radius {
                let slot = (d + radius) as usize;
                out[slot] = out[slot].clone() + x.clone() * y.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::Rational;

    #[test]
    fn identity_is_neutral() {
        let e = LaurentMatrix::elementary(6, 2, ratio(1, 3), ratio(2, 5));
        let id = LaurentMatrix::<Rational>::identity(6);
        assert_eq!(id.mul(&e), e);
        assert_eq!(e.mul(&id), e);
        assert_eq!(id.coeff(0, 0, 0), int(1));
        assert_eq!(id.coeff(0, 1, 0), int(0));
    }

    #[test]
    fn sparse_left_product_agrees_with_full_product() {
        let mut acc = LaurentMatrix::<Rational>::identity(10);
        let mut full = acc.clone();
        for (j, (lo, up)) in [(1, 2), (3, 4), (5, 7), (2, 9)].iter().enumerate() {
            let (lo, up) = (ratio(*lo, 11), ratio(*up, 13));
            acc = acc.left_mul_elementary(j + 1, &lo, &up);
            full = LaurentMatrix::elementary(10, j + 1, lo, up).mul(&full);
        }
        assert_eq!(acc, full);
    }

    #[test]
    fn symmetric_truncation() {
        let e = LaurentMatrix::elementary(2, 2, int(1), int(1));
        let sq = e.mul(&e);
        // z^(-2) z^2 lands on the diagonal
        assert_eq!(sq.coeff(0, 0, 0), int(2));
        assert_eq!(sq.coeff(1, 0, 2), int(2));

        let wide = LaurentMatrix::elementary(3, 3, int(1), int(1));
        let prod = wide.mul(&e);
        assert_eq!(prod.radius(), 2);
        assert_eq!(prod.coeff(1, 0, 2), int(1));
        assert_eq!(prod.coeff(1, 0, 3), int(0));
        assert_eq!(prod.coeff(0, 0, 1), int(0));
    }
}
