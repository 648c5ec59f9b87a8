//! Clebsch and Igusa-Clebsch invariants of binary sextics via transvectants.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactnum::{rat_int, smith_decomposition, BigInt, BigRat, IntMatrix, IntPoly};

/// Binary form of degree `n` stored as the coefficients of `X^i Y^(n-i)`.
#[derive(Debug, Clone)]
struct BinaryForm {
    c: Vec<BigRat>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

fn binomial(n: usize, k: usize) -> BigInt {
    falling(n, k) / factorial(k)
}

impl BinaryForm {
    fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// `d^(a+b) / dX^a dY^b`.
    fn partial(&self, a: usize, b: usize) -> BinaryForm {
        let n = self.degree();
        let m = n - a - b;
        let mut out = vec![BigRat::zero(); m + 1];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() || i < a || n - i < b {
                continue;
            }
            let k = falling(i, a) * falling(n - i, b);
            out[i - a] += ci * BigRat::from_integer(k);
        }
        BinaryForm { c: out }
    }

    fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigRat::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm { c: out }
    }

    /// The `k`-th transvectant `(f, g)_k`.
    fn transvectant(&self, g: &BinaryForm, k: usize) -> BinaryForm {
        let (n, m) = (self.degree(), g.degree());
        let mut acc = BinaryForm { c: vec![BigRat::zero(); n + m - 2 * k + 1] };
        for j in 0..=k {
            let term = self.partial(k - j, j).mul(&g.partial(j, k - j));
            let coef = BigRat::from_integer(binomial(k, j));
            let coef = if j % 2 == 1 { -coef } else { coef };
            for (a, t) in acc.c.iter_mut().zip(&term.c) {
                *a += &coef * t;
            }
        }
        let norm = BigRat::new(factorial(n - k) * factorial(m - k), factorial(n) * factorial(m));
        for a in &mut acc.c {
            *a *= &norm;
        }
        acc
    }

    fn constant(&self) -> BigRat {
        debug_assert_eq!(self.degree(), 0);
        self.c[0].clone()
    }
}

/// Clebsch invariants `(A, B, C, D)` of the sextic `sum c_i x^i`.
pub fn clebsch_invariants(s: &IntPoly) -> [BigRat; 4] {
    let f = BinaryForm { c: (0..=6).map(|i| BigRat::from_integer(s.coeff(i))).collect() };
    let i = f.transvectant(&f, 4);
    let delta = i.transvectant(&i, 2);
    let y1 = f.transvectant(&i, 4);
    let y2 = i.transvectant(&y1, 2);
    let y3 = i.transvectant(&y2, 2);
    let a = f.transvectant(&f, 6).constant();
    let b = i.transvectant(&i, 4).constant();
    let c = i.transvectant(&delta, 4).constant();
    let d = y3.transvectant(&y1, 2).constant();
    [a, b, c, d]
}

/// Igusa-Clebsch invariants `(I2, I4, I6, I10)` of a binary sextic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IgusaClebsch {
    pub i2: BigRat,
    pub i4: BigRat,
    pub i6: BigRat,
    pub i10: BigRat,
}

const WEIGHTS: [i64; 4] = [1, 2, 3, 5];

/// Invariants of `sum c_i x^i` (degree at most 6, viewed as a sextic form).
/// `I10` equals the discriminant of the sextic.
pub fn igusa_clebsch_of_sextic(s: &IntPoly) -> IgusaClebsch {
    let [a, b, c, d] = clebsch_invariants(s);
    let k = |v: i64| rat_int(v);
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let i2 = k(-120) * &a;
    let i4 = k(-720) * &a2 + k(6750) * &b;
    let i6 = k(8640) * &a3 - k(108000) * &a * &b + k(202500) * &c;
    let i10 = k(-62208) * &a3 * &a2 + k(972000) * &a3 * &b + k(1620000) * &a2 * &c
        - k(3037500) * &a * &b * &b
        - k(6075000) * &b * &c
        - k(4556250) * &d;
    IgusaClebsch { i2, i4, i6, i10 }
}

/// Canonical invariant of a point of weighted projective space with
/// weights `(1, 2, 3, 5)`: the zero pattern and the values of a basis of
/// scaling-invariant Laurent monomials in the nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbsoluteKey {
    pub zero_pattern: [bool; 4],
    pub values: Vec<String>,
}

impl IgusaClebsch {
    pub fn as_array(&self) -> [&BigRat; 4] {
        [&self.i2, &self.i4, &self.i6, &self.i10]
    }

    /// Equal keys iff the two tuples differ by `I_k -> r^(k/2) I_k` for some
    /// nonzero `r` over an algebraic closure.
    pub fn absolute_key(&self) -> AbsoluteKey {
        let vals = self.as_array();
        let zero_pattern = vals.map(|v| v.is_zero());
        let support: Vec<usize> = (0..4).filter(|&i| !zero_pattern[i]).collect();
        let values = if support.len() <= 1 {
            Vec::new()
        } else {
            let w = IntMatrix::new(
                1,
                support.len(),
                support.iter().map(|&i| BigInt::from(WEIGHTS[i])).collect(),
            )
            .expect("shape");
            let snf = smith_decomposition(&w);
            (1..support.len())
                .map(|col| {
                    let mut acc = BigRat::one();
                    for (row, &i) in support.iter().enumerate() {
                        let e = snf.v.get(row, col);
                        let e: i64 = e.try_into().expect("small exponent");
                        acc *= crate::exactnum::rat_pow(vals[i], e);
                    }
                    acc.to_string()
                })
                .collect()
        };
        AbsoluteKey { zero_pattern, values }
    }

    pub fn is_equivalent(&self, other: &IgusaClebsch) -> bool {
        self.absolute_key() == other.absolute_key()
    }

    /// `(I2^5 / I10, I2^3 I4 / I10, I2^2 I6 / I10)`, the usual absolute
    /// invariants when `I10 != 0`.
    pub fn absolute_invariants(&self) -> Option<[BigRat; 3]> {
        if self.i10.is_zero() {
            return None;
        }
        let i2 = &self.i2;
        let i2sq = i2 * i2;
        Some([
            &i2sq * &i2sq * i2 / &self.i10,
            &i2sq * i2 * &self.i4 / &self.i10,
            &i2sq * &self.i6 / &self.i10,
        ])
    }
}

impl Serialize for IgusaClebsch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().map(|v| v.to_string()).serialize(s)
    }
}
