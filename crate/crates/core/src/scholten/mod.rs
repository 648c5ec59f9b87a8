//! The curves `C_{a,b,c,d}: (ad - bc) y^2 = ((a-b)x^2 - (c-d))(ax^2 - c)(bx^2 - d)`,
//! whose Jacobians are isogenous to `E_{a,b} x E_{c,d}`.

mod search;

pub use search::{parameter_search, read_parameter_grid, SearchPredicate, SearchRanges, SearchRecord, SearchSummary};

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{ap_trace, TwoTorsionCurve};
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, residue_int, BigInt, IntPoly};
use crate::genus2::{hyperelliptic_point_count, sextic_discriminant, AbsoluteKey, HyperellipticCurve};

/// Minimum number of primes a split Jacobian certificate must test.
pub const MIN_CERTIFICATE_PRIMES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Degeneracy {
    /// `ad - bc = 0`.
    LambdaZero,
    /// `ab(a - b) = 0`.
    FirstFactorDegenerate,
    /// `cd(c - d) = 0`.
    SecondFactorDegenerate,
    /// `S` has a repeated root, possibly at infinity.
    RepeatedRoots,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::LambdaZero => "lambda = 0",
            Degeneracy::FirstFactorDegenerate => "ab(a-b) = 0",
            Degeneracy::SecondFactorDegenerate => "cd(c-d) = 0",
            Degeneracy::RepeatedRoots => "repeated roots",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ScholtenStatus {
    SmoothGenus2,
    Degenerate(Degeneracy),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScholtenCurve {
    params: [BigInt; 4],
    lambda: BigInt,
    sextic: IntPoly,
    status: ScholtenStatus,
    violations: Vec<Degeneracy>,
    e1: Option<TwoTorsionCurve>,
    e2: Option<TwoTorsionCurve>,
}

fn poly(c: &[BigInt]) -> IntPoly {
    IntPoly::new(c.to_vec())
}

/// `C_{a,b,c,d}` with its status. Degeneracy is reported, never an error.
pub fn build_scholten(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> ScholtenCurve {
    let z = BigInt::zero();
    let lambda = a * d - b * c;
    let q0 = poly(&[-(c - d), z.clone(), a - b]);
    let q1 = poly(&[-c, z.clone(), a.clone()]);
    let q2 = poly(&[-d, z, b.clone()]);
    let sextic = q0.mul(&q1).mul(&q2);
    let e1 = TwoTorsionCurve::new(a.clone(), b.clone()).ok();
    let e2 = TwoTorsionCurve::new(c.clone(), d.clone()).ok();
    let mut violations = Vec::new();
    if lambda.is_zero() {
        violations.push(Degeneracy::LambdaZero);
    }
    if e1.is_none() {
        violations.push(Degeneracy::FirstFactorDegenerate);
    }
    if e2.is_none() {
        violations.push(Degeneracy::SecondFactorDegenerate);
    }
    let squarefree = sextic.degree() == Some(6) && !sextic_discriminant(&sextic).expect("sextic").is_zero();
    if !squarefree {
        violations.push(Degeneracy::RepeatedRoots);
    }
    let status = violations.first().map_or(ScholtenStatus::SmoothGenus2, |&v| ScholtenStatus::Degenerate(v));
    ScholtenCurve { params: [a.clone(), b.clone(), c.clone(), d.clone()], lambda, sextic, status, violations, e1, e2 }
}

pub fn build_scholten_i64(a: i64, b: i64, c: i64, d: i64) -> ScholtenCurve {
    build_scholten(&BigInt::from(a), &BigInt::from(b), &BigInt::from(c), &BigInt::from(d))
}

impl ScholtenCurve {
    pub fn params(&self) -> &[BigInt; 4] {
        &self.params
    }

    pub fn lambda(&self) -> &BigInt {
        &self.lambda
    }

    pub fn sextic(&self) -> &IntPoly {
        &self.sextic
    }

    pub fn status(&self) -> ScholtenStatus {
        self.status
    }

    pub fn is_smooth(&self) -> bool {
        self.status == ScholtenStatus::SmoothGenus2
    }

    /// Every violated condition, in the order `lambda`, `E1`, `E2`, roots.
    pub fn violations(&self) -> &[Degeneracy] {
        &self.violations
    }

    pub fn e1(&self) -> Option<&TwoTorsionCurve> {
        self.e1.as_ref()
    }

    pub fn e2(&self) -> Option<&TwoTorsionCurve> {
        self.e2.as_ref()
    }

    /// The hyperelliptic curve, when smooth.
    pub fn curve(&self) -> Option<HyperellipticCurve> {
        self.is_smooth()
            .then(|| HyperellipticCurve::new(self.lambda.clone(), self.sextic.clone()).expect("smooth"))
    }

    /// Absolute Igusa-Clebsch key, when smooth.
    pub fn class_key(&self) -> Option<AbsoluteKey> {
        self.curve().map(|c| c.igusa_clebsch().expect("smooth").absolute_key())
    }
}

impl Serialize for ScholtenCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("ScholtenCurve", 7)?;
        st.serialize_field("params", &strs(&self.params))?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("sextic", &strs(self.sextic.coeffs()))?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("violations", &self.violations)?;
        st.serialize_field("e1", &self.e1)?;
        st.serialize_field("e2", &self.e2)?;
        st.end()
    }
}

/// All forms `E_{a',b'}` obtained by moving one root of `x(x-a)(x-b)` to 0:
/// for each ordering `(r_i, r_j, r_k)` of `{0, a, b}`, the pair
/// `(r_j - r_i, r_k - r_i)`. Deduplicated, in permutation order.
pub fn torsion_forms_orbit(a: &BigInt, b: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let base = TwoTorsionCurve::new(a.clone(), b.clone())?;
    let j = base.j_invariant();
    let roots = [BigInt::zero(), a.clone(), b.clone()];
    let mut out: Vec<(BigInt, BigInt)> = Vec::new();
    for [i, k, l] in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let pair = (&roots[k] - &roots[i], &roots[l] - &roots[i]);
        if !out.contains(&pair) {
            let e = TwoTorsionCurve::new(pair.0.clone(), pair.1.clone())?;
            assert_eq!(e.j_invariant(), j, "root translation changed j");
            out.push(pair);
        }
    }
    Ok(out)
}

/// One entry of the conventional six-form list checked against the
/// root-translation orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitAudit {
    pub form: String,
    pub a: String,
    pub b: String,
    pub j_matches: bool,
    pub in_orbit: bool,
}

/// Checks the forms `(a,b), (b,a), (-b,b-a), (b-a,-a), (a-b,-b), (-b,a-b)`
/// against `j(E_{a,b})` and against [`torsion_forms_orbit`]. A form with a
/// degenerate pair reports `j_matches = false`.
pub fn audit_listed_orbit(a: &BigInt, b: &BigInt) -> Result<Vec<OrbitAudit>> {
    let orbit = torsion_forms_orbit(a, b)?;
    let j = TwoTorsionCurve::new(a.clone(), b.clone())?.j_invariant();
    let forms = [
        ("(a,b)", a.clone(), b.clone()),
        ("(b,a)", b.clone(), a.clone()),
        ("(-b,b-a)", -b, b - a),
        ("(b-a,-a)", b - a, -a),
        ("(a-b,-b)", a - b, -b),
        ("(-b,a-b)", -b, a - b),
    ];
    Ok(forms
        .into_iter()
        .map(|(form, x, y)| {
            let j_matches = TwoTorsionCurve::new(x.clone(), y.clone()).is_ok_and(|e| e.j_invariant() == j);
            let in_orbit = orbit.contains(&(x.clone(), y.clone()));
            OrbitAudit { form: form.into(), a: x.to_string(), b: y.to_string(), j_matches, in_orbit }
        })
        .collect())
}

/// The curves `C_{a',b',c,d}` over the orbit of `(a, b)`, grouped into
/// geometric isomorphism classes. Twists fall in the same class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScholtenFamily {
    pub members: Vec<ScholtenCurve>,
    /// Indices into `members`, one list per class, in order of first
    /// appearance.
    pub classes: Vec<Vec<usize>>,
    pub discarded: Vec<ScholtenCurve>,
}

impl ScholtenFamily {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

pub fn scholten_family(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<ScholtenFamily> {
    TwoTorsionCurve::new(c.clone(), d.clone())?;
    let mut members = Vec::new();
    let mut discarded = Vec::new();
    for (x, y) in torsion_forms_orbit(a, b)? {
        let s = build_scholten(&x, &y, c, d);
        if s.is_smooth() {
            members.push(s);
        } else {
            discarded.push(s);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<AbsoluteKey, usize> = HashMap::new();
    for (i, m) in members.iter().enumerate() {
        let key = m.class_key().expect("smooth member");
        let slot = *by_key.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[slot].push(i);
    }
    Ok(ScholtenFamily { members, classes, discarded })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub p: u64,
    pub curve_count: u64,
    pub ap_e1: i64,
    pub ap_e2: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedPrime {
    pub p: u64,
    pub reason: String,
}

/// Point-count evidence for `Jac(C) ~ E1 x E2`: at each tested prime,
/// `#C(F_p) = p + 1 - a_p(E1) - a_p(E2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitJacobianCertificate {
    pub curve: ScholtenCurve,
    pub e1: TwoTorsionCurve,
    pub e2: TwoTorsionCurve,
    pub checks: Vec<PrimeCheck>,
    pub excluded: Vec<ExcludedPrime>,
    pub verdict: bool,
}

impl SplitJacobianCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &PrimeCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn exclusion_reason(c: &ScholtenCurve, e1: &TwoTorsionCurve, e2: &TwoTorsionCurve, p: u64) -> Option<String> {
    if p == 2 {
        return Some("p = 2".into());
    }
    if !is_prime(p) {
        return Some(format!("{p} is not prime"));
    }
    let divides = |n: &BigInt| residue_int(n, p) == 0;
    if divides(&c.lambda) {
        return Some("p divides lambda".into());
    }
    if divides(&c.sextic.leading()) {
        return Some("p divides the leading coefficient of S".into());
    }
    if divides(&sextic_discriminant(&c.sextic).expect("smooth")) {
        return Some("p divides disc(S)".into());
    }
    if divides(&e1.discriminant()) {
        return Some("p divides disc(E1)".into());
    }
    if divides(&e2.discriminant()) {
        return Some("p divides disc(E2)".into());
    }
    None
}

/// Checks the count identity for `C` against its own factors.
pub fn verify_split_jacobian(c: &ScholtenCurve, primes: &[u64]) -> Result<SplitJacobianCertificate> {
    let (Some(e1), Some(e2)) = (c.e1.clone(), c.e2.clone()) else {
        return Err(Error::InvalidArgument(format!("curve is {:?}", c.status)));
    };
    verify_split_jacobian_against(c, &e1, &e2, primes)
}

/// Checks the count identity for `C` against arbitrary factors, e.g. a
/// deliberately wrong `E1` as a negative control.
pub fn verify_split_jacobian_against(
    c: &ScholtenCurve,
    e1: &TwoTorsionCurve,
    e2: &TwoTorsionCurve,
    primes: &[u64],
) -> Result<SplitJacobianCertificate> {
    let Some(curve) = c.curve() else {
        return Err(Error::InvalidArgument(format!("curve is {:?}", c.status)));
    };
    let mut excluded = Vec::new();
    let mut usable = Vec::new();
    for &p in primes {
        if usable.contains(&p) || excluded.iter().any(|e: &ExcludedPrime| e.p == p) {
            continue;
        }
        match exclusion_reason(c, e1, e2, p) {
            Some(reason) => excluded.push(ExcludedPrime { p, reason }),
            None => usable.push(p),
        }
    }
    if usable.len() < MIN_CERTIFICATE_PRIMES {
        return Err(Error::InsufficientPrimes { tested: usable.len(), required: MIN_CERTIFICATE_PRIMES });
    }
    let (m1, m2) = (e1.model(), e2.model());
    let checks = usable
        .par_iter()
        .map(|&p| {
            let curve_count = hyperelliptic_point_count(&curve, p)?;
            let ap_e1 = ap_trace(&m1, p)?;
            let ap_e2 = ap_trace(&m2, p)?;
            let pass = curve_count as i64 == p as i64 + 1 - ap_e1 - ap_e2;
            Ok(PrimeCheck { p, curve_count, ap_e1, ap_e2, pass })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = checks.iter().all(|k| k.pass);
    Ok(SplitJacobianCertificate { curve: c.clone(), e1: e1.clone(), e2: e2.clone(), checks, excluded, verdict })
}

/// The first `count` primes passing the goodness filter for `C` and its
/// own factors.
pub fn good_primes(c: &ScholtenCurve, count: usize) -> Vec<u64> {
    let (Some(e1), Some(e2)) = (&c.e1, &c.e2) else { return Vec::new() };
    if !c.is_smooth() {
        return Vec::new();
    }
    (3u64..).filter(|&p| exclusion_reason(c, e1, e2, p).is_none()).take(count).collect()
}
