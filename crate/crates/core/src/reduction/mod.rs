//! Local reduction of elliptic curves over the rationals.

mod tate;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::elliptic::{character_sum, completed_cubic, is_supersingular_at, ModelTransform, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exactnum::{
    factor, is_prime, inv_mod, legendre_symbol, mul_mod, rat_valuation, residue, BigInt, BigRat,
    QuadraticCharacter,
};
use num_traits::ToPrimitive;

/// Kodaira symbol of the special fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components of the special fibre.
    pub fn components(&self) -> u32 {
        match self {
            KodairaType::I0 => 1,
            KodairaType::In(n) => *n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::I0Star => 5,
            KodairaType::InStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::In(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::I0Star => write!(f, "I0*"),
            KodairaType::InStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ActualType {
    GoodOrdinary,
    GoodSupersingular,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ActualType {
    pub fn is_good(&self) -> bool {
        matches!(self, ActualType::GoodOrdinary | ActualType::GoodSupersingular)
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, ActualType::SplitMultiplicative | ActualType::NonsplitMultiplicative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PotentialType {
    PotGoodOrdinary,
    PotGoodSupersingular,
    PotMultiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub p: u64,
    pub kodaira: KodairaType,
    /// `v_p` of the minimal discriminant.
    pub disc_valuation: u32,
    pub conductor_exponent: u32,
    pub actual_type: ActualType,
    /// `None` at `p = 2`.
    pub potential_type: Option<PotentialType>,
}

/// A `p`-minimal, `p`-integral model and the transform that produces it
/// from the input model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalModel {
    pub model: WeierstrassModel,
    pub transform: ModelTransform,
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// A `p`-minimal model. The input is returned unchanged when it is already
/// `p`-integral and `p`-minimal; otherwise only the scaling and the
/// non-integral part of the translation are applied.
pub fn minimal_model_at(model: &WeierstrassModel, p: u64) -> Result<MinimalModel> {
    check_prime(p)?;
    let out = tate::tate(model, p);
    let t = &out.transform;
    let u = t.u.clone();
    let u2 = &u * &u;
    let u3 = &u2 * &u;
    let rho = &t.r / &u2;
    let sigma = &t.s / &u;
    let tau = &t.t / &u3;
    let rho1 = tate::polar_part(&rho, p);
    let sigma1 = tate::polar_part(&sigma, p);
    let rho2 = &rho - &rho1;
    let tau1 = tate::polar_part(&(&tau - &sigma1 * &rho2), p);
    let transform = ModelTransform { r: &u2 * rho1, s: &u * sigma1, t: &u3 * tau1, u };
    if transform.is_identity() {
        return Ok(MinimalModel { model: model.clone(), transform });
    }
    let min = model.transform(&transform);
    debug_assert!(min.coefficients().iter().all(|c| rat_valuation(c, p).is_none_or(|v| v >= 0)));
    Ok(MinimalModel { model: min, transform })
}

fn supersingular_at_two(min: &WeierstrassModel) -> bool {
    // #E(F_2) by brute force; supersingular iff a_2 is even.
    let a: Vec<u64> = min.coefficients().iter().map(|c| residue(c, 2).expect("integral")).collect();
    let mut n = 1u64;
    for x in 0..2u64 {
        for y in 0..2u64 {
            let lhs = y * y + a[0] * x * y + a[2] * y;
            let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
            if (lhs + rhs) % 2 == 0 {
                n += 1;
            }
        }
    }
    (3 - n as i64) % 2 == 0
}

/// Reduction type, Kodaira symbol and conductor exponent at `p`.
pub fn classify_reduction(model: &WeierstrassModel, p: u64) -> Result<ReductionReport> {
    check_prime(p)?;
    let out = tate::tate(model, p);
    let actual_type = match out.kodaira {
        KodairaType::I0 => {
            let ss = if p == 2 { supersingular_at_two(&out.model) } else { is_supersingular_at(&out.model, p)? };
            if ss {
                ActualType::GoodSupersingular
            } else {
                ActualType::GoodOrdinary
            }
        }
        KodairaType::In(_) => {
            let split = if p == 2 {
                out.tangent_cone_split.expect("recorded for multiplicative reduction")
            } else {
                minus_c6_is_square(&out.model, p)
            };
            if split {
                ActualType::SplitMultiplicative
            } else {
                ActualType::NonsplitMultiplicative
            }
        }
        _ => ActualType::Additive,
    };
    let potential_type = if p == 2 { None } else { Some(potential_type(model, p)?) };
    Ok(ReductionReport {
        p,
        kodaira: out.kodaira,
        disc_valuation: out.disc_valuation,
        conductor_exponent: out.conductor_exponent,
        actual_type,
        potential_type,
    })
}

fn minus_c6_is_square(min: &WeierstrassModel, p: u64) -> bool {
    let c6 = -min.c6();
    legendre_symbol(c6.numer(), &BigInt::from(p)).expect("odd prime")
        * legendre_symbol(c6.denom(), &BigInt::from(p)).expect("odd prime")
        == 1
}

/// Primes that can divide the conductor: those dividing the discriminant or
/// a coefficient denominator.
pub fn bad_prime_candidates(model: &WeierstrassModel) -> Vec<u64> {
    let mut n = model.discriminant().numer().abs();
    for c in model.coefficients() {
        n *= c.denom();
    }
    factor(&n).into_iter().map(|(q, _)| q.to_u64().expect("prime fits in u64")).collect()
}

/// Conductor `N = prod p^f_p`.
pub fn conductor(model: &WeierstrassModel) -> Result<BigInt> {
    let mut n = BigInt::one();
    for p in bad_prime_candidates(model) {
        let f = tate::tate(model, p).conductor_exponent;
        n *= BigInt::from(p).pow(f);
    }
    Ok(n)
}

/// Conductor exponents at the bad primes, ascending by prime.
pub fn local_conductor_exponents(model: &WeierstrassModel) -> Vec<(u64, u32)> {
    bad_prime_candidates(model)
        .into_iter()
        .map(|p| (p, tate::tate(model, p).conductor_exponent))
        .filter(|(_, f)| *f > 0)
        .collect()
}

// Coefficients over F_p of a curve with the given j-invariant.
fn reference_curve(j: u64, p: u64) -> [u64; 5] {
    if p == 3 {
        return if j == 0 { [0, 0, 0, 1, 0] } else { [0, 1, 0, 0, p - inv_mod(j, p).expect("unit")] };
    }
    let j1728 = 1728 % p;
    if j == 0 {
        [0, 0, 0, 0, 1]
    } else if j == j1728 {
        [0, 0, 0, 1, 0]
    } else {
        let k = mul_mod(j, (j1728 + p - j) % p, p);
        [0, 0, 0, mul_mod(3, k, p), mul_mod(mul_mod(2, k, p), (j1728 + p - j) % p, p)]
    }
}

/// Potential reduction type at an odd prime, determined by `j`.
pub fn potential_type(model: &WeierstrassModel, p: u64) -> Result<PotentialType> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    check_prime(p)?;
    let j = model.j_invariant();
    if rat_valuation(&j, p).is_some_and(|v| v < 0) {
        return Ok(PotentialType::PotMultiplicative);
    }
    let jbar = residue(&j, p).expect("p-integral j");
    let reference = reference_curve(jbar, p);
    let chi = QuadraticCharacter::new(p);
    let ap = -character_sum(&completed_cubic(&reference, p), &chi);
    Ok(if ap.rem_euclid(p as i64) == 0 {
        PotentialType::PotGoodSupersingular
    } else {
        PotentialType::PotGoodOrdinary
    })
}

/// `v_p(j)`, or `None` for `j = 0`.
pub fn j_valuation(model: &WeierstrassModel, p: u64) -> Option<i64> {
    let j: BigRat = model.j_invariant();
    if j.is_zero() {
        return None;
    }
    rat_valuation(&j, p)
}
