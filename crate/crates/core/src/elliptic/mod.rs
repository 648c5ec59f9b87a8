//! Elliptic curves over the rationals and their reductions modulo primes.

mod group;
mod weierstrass;

pub use group::{CurveGroupModP, PointModP};
pub use weierstrass::{ModelTransform, WeierstrassModel};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    is_prime, mul_mod, rat_int, residue, BigInt, BigRat, QuadraticCharacter,
};
use crate::reduction::minimal_model_at;

/// `y^2 = x(x - a)(x - b)` with `a`, `b` nonzero and distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TwoTorsionCurve {
    #[serde(serialize_with = "ser_display")]
    a: BigInt,
    #[serde(serialize_with = "ser_display")]
    b: BigInt,
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl TwoTorsionCurve {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DegenerateCurve("a = 0".into()));
        }
        if b.is_zero() {
            return Err(Error::DegenerateCurve("b = 0".into()));
        }
        if a == b {
            return Err(Error::DegenerateCurve("a = b".into()));
        }
        Ok(Self { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `y^2 = x^3 - (a+b) x^2 + ab x`.
    pub fn model(&self) -> WeierstrassModel {
        let z = BigRat::zero();
        WeierstrassModel::new([
            z.clone(),
            rat_int(-(&self.a + &self.b)),
            z.clone(),
            rat_int(&self.a * &self.b),
            z,
        ])
        .expect("nonzero discriminant by construction")
    }

    pub fn discriminant(&self) -> BigInt {
        let d = &self.a * &self.b * (&self.a - &self.b);
        BigInt::from(16) * &d * &d
    }

    pub fn j_invariant(&self) -> BigRat {
        self.model().j_invariant()
    }
}

/// The curve `E_{a,b}` together with its Weierstrass model.
pub fn curve_from_pair(a: &BigInt, b: &BigInt) -> Result<(TwoTorsionCurve, WeierstrassModel)> {
    let e = TwoTorsionCurve::new(a.clone(), b.clone())?;
    let m = e.model();
    Ok((e, m))
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// Coefficients of a model with good reduction at the odd prime `p`,
/// reduced mod `p`. The model is first made `p`-minimal.
pub fn reduce_mod_p(model: &WeierstrassModel, p: u64) -> Result<[u64; 5]> {
    check_odd_prime(p)?;
    let min = minimal_model_at(model, p)?.model;
    if residue(&min.discriminant(), p) == Some(0) {
        return Err(Error::BadPrime { p, reason: "p divides the minimal discriminant".into() });
    }
    let mut out = [0u64; 5];
    for (o, c) in out.iter_mut().zip(min.coefficients()) {
        *o = residue(c, p).expect("minimal model is p-integral");
    }
    Ok(out)
}

// Right-hand side of (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 mod p.
pub(crate) fn completed_cubic(a: &[u64; 5], p: u64) -> [u64; 4] {
    let [a1, a2, a3, a4, a6] = *a;
    let b2 = (mul_mod(a1, a1, p) + mul_mod(4, a2, p)) % p;
    let b4 = (mul_mod(a1, a3, p) + mul_mod(2, a4, p)) % p;
    let b6 = (mul_mod(a3, a3, p) + mul_mod(4, a6, p)) % p;
    [b6, mul_mod(2, b4, p), b2, 4 % p]
}

/// `sum_x chi(f(x))` for a cubic `f` given low degree first.
pub(crate) fn character_sum(f: &[u64; 4], chi: &QuadraticCharacter) -> i64 {
    let p = chi.p();
    let mut sum = 0i64;
    for x in 0..p {
        let v = f.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p);
        sum += chi.chi(v) as i64;
    }
    sum
}

/// Trace of Frobenius `a_p = p + 1 - #E(F_p)` at an odd prime of good
/// reduction.
pub fn ap_trace(model: &WeierstrassModel, p: u64) -> Result<i64> {
    let a = reduce_mod_p(model, p)?;
    let chi = QuadraticCharacter::new(p);
    Ok(-character_sum(&completed_cubic(&a, p), &chi))
}

/// `#E(F_p)` at an odd prime of good reduction.
pub fn point_count(model: &WeierstrassModel, p: u64) -> Result<u64> {
    let ap = ap_trace(model, p)?;
    Ok((p as i64 + 1 - ap) as u64)
}

/// Good supersingular reduction at the odd prime `p`: `a_p = 0 mod p`.
pub fn is_supersingular_at(model: &WeierstrassModel, p: u64) -> Result<bool> {
    Ok(ap_trace(model, p)?.rem_euclid(p as i64) == 0)
}

/// The group `E(F_p)` at an odd prime of good reduction.
pub fn rational_points_mod_p(model: &WeierstrassModel, p: u64) -> Result<CurveGroupModP> {
    let a = reduce_mod_p(model, p)?;
    Ok(CurveGroupModP::new(a, p))
}

/// `|a_p| <= 2 sqrt(p)`, checked in integers.
pub fn within_hasse_bound(ap: i64, p: u64) -> bool {
    let ap = BigInt::from(ap).abs();
    &ap * &ap <= BigInt::from(4u64) * BigInt::from(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{primes_up_to, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x3_minus_x() -> WeierstrassModel {
        WeierstrassModel::from_ints([0, 0, 0, -1, 0]).unwrap()
    }

    // Oracle: count solutions (x, y) of the long Weierstrass equation mod p
    // by brute force over F_p^2, plus the point at infinity.
    fn brute_count(a: [i64; 5], p: u64) -> u64 {
        let p = p as i64;
        let [a1, a2, a3, a4, a6] = a;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    // Oracle: Delta and j straight from the closed forms in a, b.
    fn pair_oracle(a: i64, b: i64) -> (BigInt, BigRat) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let d = &a * &b * (&a - &b);
        let disc = BigInt::from(16) * &d * &d;
        let k = &a * &a - &a * &b + &b * &b;
        let j = BigRat::new(BigInt::from(256) * &k * &k * &k, &d * &d);
        (disc, j)
    }

    #[test]
    fn curve_from_pair_examples() {
        let (e, m) = curve_from_pair(&BigInt::from(1), &BigInt::from(-1)).unwrap();
        assert_eq!(m.discriminant(), rat_int(64));
        assert_eq!(e.discriminant(), BigInt::from(64));
        assert_eq!(m.j_invariant(), rat_int(1728));
        let (_, m) = curve_from_pair(&BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(m.j_invariant(), rat(21952, 9));
        let err = curve_from_pair(&BigInt::from(1), &BigInt::from(1)).unwrap_err();
        assert_eq!(err, Error::DegenerateCurve("a = b".into()));
        assert!(matches!(TwoTorsionCurve::from_i64(0, 2), Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn pair_invariants_match_closed_forms() {
        for a in -6i64..7 {
            for b in -6i64..7 {
                let Ok(e) = TwoTorsionCurve::from_i64(a, b) else {
                    assert!(a == 0 || b == 0 || a == b);
                    continue;
                };
                let (disc, j) = pair_oracle(a, b);
                assert_eq!(e.model().discriminant(), BigRat::from_integer(disc.clone()));
                assert_eq!(e.discriminant(), disc);
                assert_eq!(e.j_invariant(), j);
            }
        }
    }

    #[test]
    fn ap_examples() {
        let e = x3_minus_x();
        assert_eq!(ap_trace(&e, 5).unwrap(), -2);
        assert_eq!(ap_trace(&e, 7).unwrap(), 0);
        assert_eq!(ap_trace(&e, 2).unwrap_err(), Error::UnsupportedPrime(2));
        let e11 = TwoTorsionCurve::from_i64(1, 11).unwrap().model();
        assert!(matches!(ap_trace(&e11, 11), Err(Error::BadPrime { p: 11, .. })));
        assert!(matches!(ap_trace(&e, 9), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn supersingular_examples() {
        let e = x3_minus_x();
        assert!(is_supersingular_at(&e, 7).unwrap());
        assert!(!is_supersingular_at(&e, 5).unwrap());
        assert!(!is_supersingular_at(&e, 13).unwrap());
    }

    #[test]
    fn counts_match_brute_force_and_hasse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut curves = vec![[0, 0, 0, -1, 0], [0, -1, 1, 0, 0], [1, 0, 1, 4, -6]];
        while curves.len() < 12 {
            let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-9..10));
            if WeierstrassModel::from_ints(a).is_ok() {
                curves.push(a);
            }
        }
        for a in curves {
            let m = WeierstrassModel::from_ints(a).unwrap();
            for p in primes_up_to(200).into_iter().skip(1) {
                let Ok(ap) = ap_trace(&m, p) else { continue };
                assert!(within_hasse_bound(ap, p), "{a:?} p={p} ap={ap}");
                if m.discriminant().numer() % BigInt::from(p) != BigInt::zero() {
                    assert_eq!(point_count(&m, p).unwrap(), brute_count(a, p), "{a:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn non_minimal_model_is_reduced_first() {
        // y^2 = x^3 - 81x is the u = 3 rescaling of y^2 = x^3 - x
        let big = WeierstrassModel::from_ints([0, 0, 0, -81, 0]).unwrap();
        assert_eq!(ap_trace(&big, 3).unwrap(), ap_trace(&x3_minus_x(), 3).unwrap());
    }
}
