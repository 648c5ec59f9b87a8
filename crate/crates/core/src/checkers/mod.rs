//! Decidable hypothesis predicates and prime scans.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::elliptic::{ap_trace, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, primes_up_to, residue_int, BigInt};
use crate::reduction::{classify_reduction, conductor, potential_type, ActualType, PotentialType};

/// Conclusion attached to a met `main1` verdict.
pub const MAIN1_CONCLUSION: &str =
    "F^2(A)_nd is torsion of finite exponent; finite when A is a surface";
/// Conclusion attached to a met `main2` verdict.
pub const MAIN2_CONCLUSION: &str = "F^2(X)_nd is torsion of finite exponent";
/// Conclusion attached to a met `main2` verdict in the unramified good case.
pub const MAIN2_DIVISIBLE_CONCLUSION: &str = "F^2(X)_nd is p-divisible";
/// Conclusion attached to a met `global2` verdict.
pub const GLOBAL2_CONCLUSION: &str = "CH_0(A){p} is finite";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremTag {
    Main1,
    Main2,
    Global2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason")]
pub enum Verdict {
    HypothesesMet,
    NotMet(String),
}

impl Verdict {
    pub fn is_met(&self) -> bool {
        matches!(self, Verdict::HypothesesMet)
    }
}

/// Local data of one elliptic curve at the prime under test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClassification {
    pub label: String,
    pub model: String,
    pub j_invariant: String,
    pub actual_type: Option<ActualType>,
    pub potential_type: Option<PotentialType>,
}

impl CurveClassification {
    fn new(label: String, model: &WeierstrassModel, p: u64) -> Self {
        let prime = is_prime(p);
        CurveClassification {
            label,
            model: model.to_string(),
            j_invariant: model.j_invariant().to_string(),
            actual_type: prime.then(|| classify_reduction(model, p).ok()).flatten().map(|r| r.actual_type),
            potential_type: (prime && p != 2).then(|| potential_type(model, p).ok()).flatten(),
        }
    }

    fn supersingular(&self) -> bool {
        self.potential_type == Some(PotentialType::PotGoodSupersingular)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisVerdict {
    pub theorem: TheoremTag,
    pub inputs: serde_json::Value,
    pub classifications: Vec<CurveClassification>,
    pub verdict: Verdict,
    pub conclusion: Option<String>,
}

impl HypothesisVerdict {
    fn new(
        theorem: TheoremTag,
        inputs: serde_json::Value,
        classifications: Vec<CurveClassification>,
        verdict: Verdict,
        conclusion: &str,
    ) -> Self {
        let conclusion = verdict.is_met().then(|| conclusion.to_string());
        HypothesisVerdict { theorem, inputs, classifications, verdict, conclusion }
    }
}

fn odd_prime_verdict(p: u64) -> Option<Verdict> {
    if p % 2 == 0 {
        Some(Verdict::NotMet("p must be odd".into()))
    } else if !is_prime(p) {
        Some(Verdict::NotMet(format!("{p} is not prime")))
    } else {
        None
    }
}

/// At most one of the curves has potentially good supersingular reduction
/// at the odd prime `p`.
pub fn main1_check(curves: &[WeierstrassModel], p: u64) -> HypothesisVerdict {
    let classifications: Vec<CurveClassification> = curves
        .iter()
        .enumerate()
        .map(|(i, m)| CurveClassification::new(format!("E{}", i + 1), m, p))
        .collect();
    let verdict = odd_prime_verdict(p).unwrap_or_else(|| {
        let ss = classifications.iter().filter(|c| c.supersingular()).count();
        if ss > 1 {
            Verdict::NotMet(format!("{ss} factors have potentially good supersingular reduction"))
        } else {
            Verdict::HypothesesMet
        }
    });
    let inputs = json!({
        "curves": curves.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "p": p,
    });
    HypothesisVerdict::new(TheoremTag::Main1, inputs, classifications, verdict, MAIN1_CONCLUSION)
}

/// One curve `C_i` of a product: the elliptic factors of the target of its
/// isogeny and the isogeny degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFactor {
    pub curves: Vec<WeierstrassModel>,
    pub degree: u64,
}

/// Hypotheses for products of curves whose Jacobians split into elliptic
/// factors. With `unramified` and `all_good` set, and every factor of good
/// reduction at `p`, the conclusion is the `p`-divisible one.
pub fn main2_check(factors: &[ProductFactor], p: u64, unramified: bool, all_good: bool) -> HypothesisVerdict {
    let mut classifications = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for (k, m) in f.curves.iter().enumerate() {
            classifications.push(CurveClassification::new(format!("Y{}.E{}", i + 1, k + 1), m, p));
        }
    }
    let verdict = odd_prime_verdict(p).unwrap_or_else(|| {
        if let Some(f) = factors.iter().position(|f| f.degree.gcd(&p) != 1) {
            return Verdict::NotMet(format!("degree {} of factor {} is not coprime to p", factors[f].degree, f + 1));
        }
        if let Some(c) = classifications.iter().find(|c| c.potential_type.is_none()) {
            return Verdict::NotMet(format!("{} could not be classified", c.label));
        }
        let mut offset = 0;
        let mut with_ss = 0;
        for f in factors {
            let span = &classifications[offset..offset + f.curves.len()];
            offset += f.curves.len();
            if span.iter().any(CurveClassification::supersingular) {
                with_ss += 1;
            }
        }
        if with_ss > 1 {
            Verdict::NotMet(format!("{with_ss} products contain a potentially supersingular coordinate"))
        } else {
            Verdict::HypothesesMet
        }
    });
    let divisible = unramified
        && all_good
        && classifications.iter().all(|c| c.actual_type.is_some_and(|t| t.is_good()));
    let inputs = json!({
        "factors": factors.iter().map(|f| json!({
            "curves": f.curves.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "degree": f.degree,
        })).collect::<Vec<_>>(),
        "p": p,
        "unramified": unramified,
        "all_good": all_good,
    });
    let conclusion = if divisible { MAIN2_DIVISIBLE_CONCLUSION } else { MAIN2_CONCLUSION };
    HypothesisVerdict::new(TheoremTag::Main2, inputs, classifications, verdict, conclusion)
}

/// Primes `p <= bound` coprime to `6 N deg_phi`, where `N` is the conductor
/// of `model`.
pub fn global2_prime_filter(model: &WeierstrassModel, deg_phi: u64, bound: u64) -> Result<Vec<u64>> {
    if deg_phi == 0 {
        return Err(Error::InvalidArgument("deg_phi must be at least 1".into()));
    }
    let n = BigInt::from(6u64 * deg_phi) * conductor(model)?;
    Ok(primes_up_to(bound).into_iter().filter(|&p| residue_int(&n, p) != 0).collect())
}

/// Verdict form of [`global2_prime_filter`] for a single prime.
pub fn global2_check(model: &WeierstrassModel, deg_phi: u64, p: u64) -> Result<HypothesisVerdict> {
    let classifications = vec![CurveClassification::new("E".into(), model, p)];
    let verdict = if !is_prime(p) {
        Verdict::NotMet(format!("{p} is not prime"))
    } else if global2_prime_filter(model, deg_phi, p)?.last() == Some(&p) {
        Verdict::HypothesesMet
    } else {
        Verdict::NotMet(format!("p divides 6 N deg(phi) = {}", BigInt::from(6u64 * deg_phi) * conductor(model)?))
    };
    let inputs = json!({ "curve": model.to_string(), "deg_phi": deg_phi, "p": p });
    Ok(HypothesisVerdict::new(TheoremTag::Global2, inputs, classifications, verdict, GLOBAL2_CONCLUSION))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupersingularScan {
    pub bound: u64,
    pub primes: Vec<u64>,
    /// Odd primes of good reduction up to `bound`.
    pub good_primes_tested: usize,
    /// `primes.len() / good_primes_tested`, or 0 when nothing was tested.
    pub density: f64,
}

/// Odd primes of good reduction `p <= bound` with `a_p = 0 mod p`.
pub fn supersingular_scan(model: &WeierstrassModel, bound: u64) -> SupersingularScan {
    let results: Vec<(u64, Option<bool>)> = primes_up_to(bound)
        .into_par_iter()
        .filter(|&p| p != 2)
        .map(|p| (p, ap_trace(model, p).ok().map(|ap| ap.rem_euclid(p as i64) == 0)))
        .collect();
    let good: Vec<&(u64, Option<bool>)> = results.iter().filter(|r| r.1.is_some()).collect();
    let primes: Vec<u64> = good.iter().filter(|r| r.1 == Some(true)).map(|r| r.0).collect();
    let density = if good.is_empty() { 0.0 } else { primes.len() as f64 / good.len() as f64 };
    SupersingularScan { bound, primes, good_primes_tested: good.len(), density }
}
