//! Exact integer and rational arithmetic used throughout the crate.
//!
//! Everything here is exact; there is no floating point anywhere in this
//! module. Integers are [`BigInt`], rationals are [`BigRat`] (always reduced
//! with a positive denominator, courtesy of `num-rational`).

mod lattice;
mod matrix;
mod poly;
mod primes;
mod smith;

pub use lattice::{solve_integer_linear, LatticeBasis};
pub use matrix::IntMatrix;
pub use poly::IntPoly;
pub use primes::{factor, is_prime, is_probable_prime, primes_up_to, QuadraticCharacter};
pub use smith::{smith_decomposition, smith_normal_form, SmithDecomposition};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as BigRat;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Legendre symbol `(a / p)` for an odd prime `p`.
///
/// Computed with the binary Jacobi reciprocity algorithm, so it is independent
/// of Euler's criterion (which the tests use as the oracle).
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<i8> {
    if p <= &BigInt::from(2) || p.is_even() || !is_probable_prime(p) {
        return invalid(format!("legendre symbol needs an odd prime, got {p}"));
    }
    Ok(jacobi(a, p))
}

fn jacobi(a: &BigInt, n: &BigInt) -> i8 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut sign = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1usize;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            sign = -sign;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// `p`-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational; `None` for zero.
pub fn rat_valuation(q: &BigRat, p: u64) -> Option<i64> {
    let vn = valuation(q.numer(), p)? as i64;
    let vd = valuation(q.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// True when `q` is zero or has positive `p`-adic valuation.
pub fn p_divides(q: &BigRat, p: u64) -> bool {
    rat_valuation(q, p).is_none_or(|v| v > 0)
}

/// Residue of a `p`-integral rational in `[0, p)`; `None` if `p` divides the
/// denominator.
pub fn residue(q: &BigRat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let inv = inv_mod(den.to_u64()?, p)?;
    Some(mul_mod(num, inv, p))
}

/// Residue of an integer in `[0, p)`.
pub fn residue_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a, m - b % m, m)
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = ((a % m) as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Rational `a / b` from integers (panics on `b == 0`).
pub fn rat(a: i64, b: i64) -> BigRat {
    BigRat::new(BigInt::from(a), BigInt::from(b))
}

pub fn rat_int(a: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(a.into())
}

/// Integer power of a rational, negative exponents allowed (base nonzero then).
pub fn rat_pow(q: &BigRat, e: i64) -> BigRat {
    let mut acc = BigRat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= q;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}
