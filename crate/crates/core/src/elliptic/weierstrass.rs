use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, BigInt, BigRat};

/// Long Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// over the rationals with nonzero discriminant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    a: [BigRat; 5],
}

/// Admissible change of variables `x = u^2 x' + r`,
/// `y = u^3 y' + s u^2 x' + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelTransform {
    pub u: BigRat,
    pub r: BigRat,
    pub s: BigRat,
    pub t: BigRat,
}

impl ModelTransform {
    pub fn identity() -> Self {
        Self { u: BigRat::one(), r: BigRat::zero(), s: BigRat::zero(), t: BigRat::zero() }
    }

    pub fn new(u: BigRat, r: BigRat, s: BigRat, t: BigRat) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::InvalidArgument("transform with u = 0".into()));
        }
        Ok(Self { u, r, s, t })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// The transform equal to applying `self` and then `next`.
    pub fn then(&self, next: &ModelTransform) -> ModelTransform {
        let u1 = &self.u;
        let u1sq = u1 * u1;
        ModelTransform {
            u: u1 * &next.u,
            r: &self.r + &u1sq * &next.r,
            s: &self.s + u1 * &next.s,
            t: &self.t + &u1sq * u1 * &next.t + &self.s * &u1sq * &next.r,
        }
    }

    pub fn inverse(&self) -> ModelTransform {
        let ui = self.u.recip();
        ModelTransform {
            u: ui.clone(),
            r: -&self.r * &ui * &ui,
            s: -&self.s * &ui,
            t: (&self.r * &self.s - &self.t) * &ui * &ui * &ui,
        }
    }
}

impl WeierstrassModel {
    /// From `[a1, a2, a3, a4, a6]`; a zero discriminant is rejected.
    pub fn new(a: [BigRat; 5]) -> Result<Self> {
        let m = Self { a };
        if m.discriminant().is_zero() {
            return Err(Error::SingularCurve(format!("discriminant vanishes for {m}")));
        }
        Ok(m)
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(rat_int))
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(a4: BigRat, a6: BigRat) -> Result<Self> {
        Self::new([BigRat::zero(), BigRat::zero(), BigRat::zero(), a4, a6])
    }

    pub fn coefficients(&self) -> &[BigRat; 5] {
        &self.a
    }

    pub fn a1(&self) -> &BigRat {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigRat {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigRat {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigRat {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigRat {
        &self.a[4]
    }

    pub fn b2(&self) -> BigRat {
        self.a1() * self.a1() + self.a2() * rat_int(4)
    }

    pub fn b4(&self) -> BigRat {
        self.a1() * self.a3() + self.a4() * rat_int(2)
    }

    pub fn b6(&self) -> BigRat {
        self.a3() * self.a3() + self.a6() * rat_int(4)
    }

    pub fn b8(&self) -> BigRat {
        let [a1, a2, a3, a4, a6] = &self.a;
        a1 * a1 * a6 + a2 * a6 * rat_int(4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> BigRat {
        let b2 = self.b2();
        &b2 * &b2 - self.b4() * rat_int(24)
    }

    pub fn c6(&self) -> BigRat {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + b2 * self.b4() * rat_int(36) - self.b6() * rat_int(216)
    }

    pub fn discriminant(&self) -> BigRat {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - &b4 * &b4 * &b4 * rat_int(8) - &b6 * &b6 * rat_int(27)
            + b2 * b4 * b6 * rat_int(9)
    }

    pub fn j_invariant(&self) -> BigRat {
        let c4 = self.c4();
        &c4 * &c4 * &c4 / self.discriminant()
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if the model is integral.
    pub fn integer_coefficients(&self) -> Option<[BigInt; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some(self.a.clone().map(|c| c.to_integer()))
    }

    /// The model in the new coordinates of `w`.
    pub fn transform(&self, w: &ModelTransform) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = &self.a;
        let ModelTransform { u, r, s, t } = w;
        let two = rat_int(2);
        let three = rat_int(3);
        let n1 = a1 + s * &two;
        let n2 = a2 - s * a1 + r * &three - s * s;
        let n3 = a3 + r * a1 + t * &two;
        let n4 = a4 - s * a3 + r * a2 * &two - (t + r * s) * a1 + r * r * &three - s * t * &two;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        WeierstrassModel { a: [n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6] }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", c.join(","))
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeierstrassModel{self}")
    }
}

impl Serialize for WeierstrassModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        c.serialize(s)
    }
}

impl Serialize for ModelTransform {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.u, &self.r, &self.s, &self.t].map(|x| x.to_string()).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn model(a: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::from_ints(a).unwrap()
    }

    #[test]
    fn invariants_identity() {
        for a in [[0, 0, 0, -1, 0], [1, -1, 1, -3, 7], [0, 1, 1, -2, 0], [1, 0, 0, 5, -11]] {
            let m = model(a);
            let lhs = m.discriminant() * rat_int(1728);
            let c4 = m.c4();
            let c6 = m.c6();
            assert_eq!(lhs, &c4 * &c4 * &c4 - &c6 * &c6);
            assert_eq!(m.b8() * rat_int(4), m.b2() * m.b6() - m.b4() * m.b4());
        }
    }

    #[test]
    fn known_discriminants() {
        assert_eq!(model([0, 0, 0, -1, 0]).discriminant(), rat_int(64));
        assert_eq!(model([0, 0, 0, -1, 0]).j_invariant(), rat_int(1728));
        // 11a3: y^2 + y = x^3 - x^2
        let m = model([0, -1, 1, 0, 0]);
        assert_eq!(m.discriminant(), rat_int(-11));
        assert_eq!(m.j_invariant(), rat(-4096, 11));
        assert!(WeierstrassModel::from_ints([0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn transforms_scale_invariants() {
        let m = model([1, -1, 1, -3, 7]);
        let w = ModelTransform::new(rat(2, 3), rat(5, 1), rat(-1, 2), rat(7, 4)).unwrap();
        let n = m.transform(&w);
        let u = &w.u;
        assert_eq!(n.c4() * u.pow(4), m.c4());
        assert_eq!(n.c6() * u.pow(6), m.c6());
        assert_eq!(n.discriminant() * u.pow(12), m.discriminant());
        assert_eq!(n.j_invariant(), m.j_invariant());
        assert_eq!(n.transform(&w.inverse()), m);
        let v = ModelTransform::new(rat(-5, 1), rat(1, 3), rat(2, 1), rat(0, 1)).unwrap();
        assert_eq!(m.transform(&w).transform(&v), m.transform(&w.then(&v)));
        assert!(w.then(&w.inverse()).is_identity());
    }
}
