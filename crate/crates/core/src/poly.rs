//! Exact univariate polynomials over Q and Lagrange interpolation.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial with rational coefficients, ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPolynomial {
    coeffs: Vec<BigRational>,
}

impl CountPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        CountPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// The unique polynomial of degree below `points.len()` through the points.
/// Abscissae must be distinct.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> CountPolynomial {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for (j, (xj, yj)) in points.iter().enumerate() {
        // basis polynomial prod_{m != j} (x - x_m) / (x_j - x_m)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (m, (xm, _)) in points.iter().enumerate() {
            if m == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (t, c) in basis.iter().enumerate() {
                next[t + 1] += c;
                next[t] -= c * xm;
            }
            basis = next;
            denom *= xj - xm;
        }
        let scale = yj / denom;
        for (a, b) in acc.iter_mut().zip(&basis) {
            *a += b * &scale;
        }
    }
    CountPolynomial::new(acc)
}
