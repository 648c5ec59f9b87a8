//! Genus-2 curves `lambda * y^2 = S(x)` with `S` a binary sextic.

mod invariants;

pub use invariants::{clebsch_invariants, igusa_clebsch_of_sextic, AbsoluteKey, IgusaClebsch};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{inv_mod, is_prime, mul_mod, residue_int, BigInt, IntPoly, QuadraticCharacter};

/// Discriminant of a degree-6 polynomial, `-Res(S, S') / c6`.
pub fn sextic_discriminant(s: &IntPoly) -> Result<BigInt> {
    if s.degree() != Some(6) {
        return Err(Error::InvalidArgument(format!("expected a sextic, got degree {:?}", s.degree())));
    }
    s.discriminant()
}

/// `lambda * y^2 = S(x)` with `lambda != 0` and `deg S = 6`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperellipticCurve {
    lambda: BigInt,
    sextic: IntPoly,
}

impl HyperellipticCurve {
    pub fn new(lambda: BigInt, sextic: IntPoly) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::InvalidArgument("lambda = 0".into()));
        }
        if sextic.degree() != Some(6) {
            return Err(Error::InvalidArgument(format!("expected a sextic, got degree {:?}", sextic.degree())));
        }
        Ok(Self { lambda, sextic })
    }

    pub fn lambda(&self) -> &BigInt {
        &self.lambda
    }

    pub fn sextic(&self) -> &IntPoly {
        &self.sextic
    }

    pub fn discriminant(&self) -> BigInt {
        sextic_discriminant(&self.sextic).expect("degree checked at construction")
    }

    pub fn is_smooth(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// Igusa-Clebsch invariants of `lambda * S`, the right-hand side of the
    /// model `y^2 = lambda * S(x)` obtained by `y -> y / lambda`.
    pub fn igusa_clebsch(&self) -> Result<IgusaClebsch> {
        if !self.is_smooth() {
            return Err(Error::SingularCurve("sextic has a repeated root".into()));
        }
        Ok(igusa_clebsch_of_sextic(&self.sextic.scale(&self.lambda)))
    }

    /// The curve with `x` replaced by `x + t`.
    pub fn translate(&self, t: &BigInt) -> HyperellipticCurve {
        let shift = IntPoly::new(vec![t.clone(), BigInt::from(1)]);
        let mut acc = IntPoly::zero();
        for c in self.sextic.coeffs().iter().rev() {
            acc = acc.mul(&shift).add(&IntPoly::new(vec![c.clone()]));
        }
        HyperellipticCurve { lambda: self.lambda.clone(), sextic: acc }
    }
}

impl Serialize for HyperellipticCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HyperellipticCurve", 2)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        let c: Vec<String> = self.sextic.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("sextic", &c)?;
        st.end()
    }
}

/// Number of points on the smooth projective model over `F_p`.
pub fn hyperelliptic_point_count(c: &HyperellipticCurve, p: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let bad = |reason: &str| Err(Error::BadPrime { p, reason: reason.into() });
    let lam = residue_int(&c.lambda, p);
    if lam == 0 {
        return bad("p divides lambda");
    }
    let lead = residue_int(&c.sextic.leading(), p);
    if lead == 0 {
        return bad("p divides the leading coefficient");
    }
    if residue_int(&c.discriminant(), p) == 0 {
        return bad("p divides disc(S)");
    }
    let s: Vec<u64> = c.sextic.coeffs().iter().map(|v| residue_int(v, p)).collect();
    let lam_inv = inv_mod(lam, p).expect("unit");
    let chi = QuadraticCharacter::new(p);
    let mut n = 0i64;
    for x in 0..p {
        let v = s.iter().rev().fold(0u64, |acc, &k| (mul_mod(acc, x, p) + k) % p);
        n += 1 + chi.chi(mul_mod(lam_inv, v, p)) as i64;
    }
    n += 1 + chi.chi(mul_mod(lam_inv, lead, p)) as i64;
    Ok(n as u64)
}
