use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{residue_int, IntMatrix};
use crate::error::{invalid, Result};

/// Univariate integer polynomial, coefficients stored low degree first with
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(roots: &[BigInt]) -> Self {
        roots.iter().fold(Self::from_i64(&[1]), |acc, r| acc.mul(&Self::new(vec![-r, BigInt::one()])))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Value at `x` reduced into `[0, p)`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let xb = BigInt::from(x);
        let v = self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| (acc * &xb + c).mod_floor(&pb));
        residue_int(&v, p)
    }

    /// Resultant as the determinant of the Sylvester matrix.
    pub fn resultant(&self, other: &IntPoly) -> Result<BigInt> {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return invalid("resultant of the zero polynomial");
        };
        let size = m + n;
        if size == 0 {
            return Ok(BigInt::one());
        }
        let mut data = vec![BigInt::zero(); size * size];
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                data[row * size + row + k] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                data[(n + row) * size + row + k] = c.clone();
            }
        }
        IntMatrix::new(size, size, data)?.determinant()
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)` of a polynomial of
    /// degree `n >= 1`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let Some(n) = self.degree().filter(|&n| n >= 1) else {
            return invalid("discriminant needs a polynomial of positive degree");
        };
        if n == 1 {
            return Ok(BigInt::one());
        }
        let res = self.resultant(&self.derivative())?;
        let (q, r) = res.div_rem(&self.leading());
        debug_assert!(r.is_zero());
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
    }
}
