//! Group rings of finite abelian groups, the Pontryagin product and the
//! filtration by powers of the augmentation ideal.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::CurveGroupModP;
use crate::error::{Error, Result};
use crate::exactnum::{smith_normal_form, BigInt, IntMatrix, LatticeBasis};

/// Largest group order accepted by [`aug_filtration`].
pub const MAX_GROUP_ORDER: u64 = 10_000;
/// Largest `r_max` accepted by [`aug_filtration`].
pub const MAX_FILTRATION_DEPTH: usize = 12;
/// Largest number of tuples [`gr_generators`] will enumerate.
pub const MAX_TUPLES: u64 = 1_000_000;

/// `Z/n1 x Z/n2 x ...` with `n1 | n2 | ...` and every `n_i > 1`. Elements
/// are indexed in mixed radix, first coordinate least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    moduli: Vec<u64>,
}

impl FinAbGroup {
    /// The group `prod Z/m_i`, brought to invariant-factor form.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidArgument("cyclic factors must be finite".into()));
        }
        let diag: Vec<BigInt> = moduli.iter().map(|&m| BigInt::from(m)).collect();
        let d = IntMatrix::diagonal(diag.len(), diag.len(), &diag);
        let moduli = smith_normal_form(&d)
            .into_iter()
            .map(|f| f.to_u64().expect("factor of a u64 product"))
            .filter(|&f| f > 1)
            .collect();
        Ok(FinAbGroup { moduli })
    }

    pub fn trivial() -> Self {
        FinAbGroup { moduli: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// The abstract group underlying `E(F_p)`.
    pub fn from_curve_group(g: &CurveGroupModP) -> Self {
        Self::new(g.structure()).expect("nonzero factors")
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn element(&self, index: usize) -> Vec<u64> {
        let mut rest = index as u64;
        self.moduli
            .iter()
            .map(|&m| {
                let c = rest % m;
                rest /= m;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        assert_eq!(coords.len(), self.moduli.len(), "coordinate count");
        let mut idx = 0u64;
        for (c, m) in coords.iter().zip(&self.moduli).rev() {
            idx = idx * m + c % m;
        }
        idx as usize
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.element(i), self.element(j));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect();
        self.index(&s)
    }

    pub fn neg(&self, i: usize) -> usize {
        let a = self.element(i);
        let s: Vec<u64> = a.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m).collect();
        self.index(&s)
    }

    /// The standard generators, one per invariant factor.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.moduli.len())
            .map(|k| {
                let mut e = vec![0; self.moduli.len()];
                e[k] = 1;
                self.index(&e)
            })
            .collect()
    }
}

/// A finitely supported integer combination of group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    group: FinAbGroup,
    coeffs: BTreeMap<usize, BigInt>,
}

impl GroupRingElement {
    pub fn zero(group: &FinAbGroup) -> Self {
        GroupRingElement { group: group.clone(), coeffs: BTreeMap::new() }
    }

    /// `[a]` for the element with index `a`.
    pub fn basis(group: &FinAbGroup, a: usize) -> Self {
        Self::zero(group).with_term(a, BigInt::one())
    }

    /// `[a] - [0]`.
    pub fn augmented(group: &FinAbGroup, a: usize) -> Self {
        Self::basis(group, a).sub(&Self::basis(group, 0)).expect("same group")
    }

    fn with_term(mut self, a: usize, c: BigInt) -> Self {
        assert!((a as u64) < self.group.order(), "element index out of range");
        let slot = self.coeffs.entry(a).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&a);
        }
        self
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coefficient(&self, a: usize) -> BigInt {
        self.coeffs.get(&a).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The augmentation `sum of coefficients`.
    pub fn degree(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::InvalidArgument("group ring elements over different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(other.terms().fold(self.clone(), |acc, (k, v)| acc.with_term(k, v.clone())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect()
        };
        GroupRingElement { group: self.group.clone(), coeffs }
    }

    /// Bilinear extension of `[a] (.) [b] = [a + b]`.
    pub fn pontryagin_product(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(&self.group);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out = out.with_term(self.group.add(a, b), x * y);
            }
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> Vec<(usize, BigInt)> {
        self.terms().map(|(k, v)| (k, v.clone())).collect()
    }

    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.group.order() as usize];
        for (k, c) in self.terms() {
            v[k] = c.clone();
        }
        v
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<u64>, String)> =
            self.terms().map(|(k, v)| (self.group.element(k), v.to_string())).collect();
        terms.serialize(s)
    }
}

fn tuple_count(group: &FinAbGroup, r: usize) -> Result<u64> {
    let n = group.order();
    let mut total = 1u64;
    for _ in 0..r {
        total = total.checked_mul(n).filter(|&t| t <= MAX_TUPLES).ok_or_else(|| {
            Error::BudgetExceeded(format!("{n}^{r} tuples exceed the limit of {MAX_TUPLES}"))
        })?;
    }
    Ok(total)
}

fn tuple(group: &FinAbGroup, r: usize, mut k: u64) -> Vec<usize> {
    let n = group.order();
    (0..r)
        .map(|_| {
            let a = (k % n) as usize;
            k /= n;
            a
        })
        .collect()
}

/// `sum_j (-1)^(r-j) sum_{i_1 < ... < i_j} [a_{i_1} + ... + a_{i_j}]`.
pub fn alternating_sum(group: &FinAbGroup, points: &[usize]) -> GroupRingElement {
    let r = points.len();
    let mut out = GroupRingElement::zero(group);
    for mask in 0u64..(1 << r) {
        let mut s = 0;
        for (i, &a) in points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = group.add(s, a);
            }
        }
        let sign = if (r - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        out = out.with_term(s, BigInt::from(sign));
    }
    out
}

/// `([a_1] - [0]) (.) ... (.) ([a_r] - [0])`.
pub fn augmented_product(group: &FinAbGroup, points: &[usize]) -> GroupRingElement {
    points.iter().fold(GroupRingElement::basis(group, 0), |acc, &a| {
        acc.pontryagin_product(&GroupRingElement::augmented(group, a)).expect("same group")
    })
}

/// The alternating sums over every `r`-tuple of elements, which span
/// `I^r` as an abelian group.
pub fn gr_generators(group: &FinAbGroup, r: usize) -> Result<Vec<GroupRingElement>> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let total = tuple_count(group, r)?;
    Ok((0..total).into_par_iter().map(|k| alternating_sum(group, &tuple(group, r, k))).collect())
}

/// The `r`-fold products `(.)([a_i] - [0])` over every `r`-tuple.
pub fn product_generators(group: &FinAbGroup, r: usize) -> Result<Vec<GroupRingElement>> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let total = tuple_count(group, r)?;
    Ok((0..total).into_par_iter().map(|k| augmented_product(group, &tuple(group, r, k))).collect())
}

fn multisets(k: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in multisets(k, r - 1) {
        let start = m.last().copied().unwrap_or(0);
        for i in start..k {
            let mut next = m.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

/// `[h] (.) prod ([g_i] - [0])` for `h` in the group and `g_1 <= ... <= g_r`
/// drawn from the standard generators. Spans the same lattice as
/// [`gr_generators`] with far fewer columns. `r = 0` gives the whole ring.
pub fn ideal_power_generators(group: &FinAbGroup, r: usize) -> Vec<GroupRingElement> {
    let gens = group.generators();
    let shapes: Vec<GroupRingElement> = multisets(gens.len(), r)
        .into_iter()
        .map(|m| augmented_product(group, &m.iter().map(|&i| gens[i]).collect::<Vec<_>>()))
        .collect();
    let n = group.order() as usize;
    (0..n)
        .into_par_iter()
        .flat_map_iter(|h| {
            let shift = GroupRingElement::basis(group, h);
            shapes.iter().map(move |s| shift.pontryagin_product(s).expect("same group")).collect::<Vec<_>>()
        })
        .filter(|e| !e.is_zero())
        .collect()
}

fn lattice(group: &FinAbGroup, elems: &[GroupRingElement]) -> LatticeBasis {
    let cols = elems.iter().map(GroupRingElement::to_sparse).collect();
    LatticeBasis::from_sparse_columns(group.order() as usize, cols).expect("indices in range")
}

/// Both lists span the same sublattice of `Z[G]`.
pub fn same_lattice(group: &FinAbGroup, x: &[GroupRingElement], y: &[GroupRingElement]) -> bool {
    let (lx, ly) = (lattice(group, x), lattice(group, y));
    let inside = |l: &LatticeBasis, elems: &[GroupRingElement]| {
        elems.iter().all(|e| l.contains(&e.to_dense()).expect("dimension"))
    };
    inside(&ly, x) && inside(&lx, y)
}

/// Invariant factors (entries > 1) of `L / M` for lattices `M <= L` of
/// equal rank.
fn quotient_factors(l: &LatticeBasis, m: &LatticeBasis) -> Vec<u64> {
    assert_eq!(l.rank(), m.rank(), "filtration steps have equal rank");
    let rank = l.rank();
    if rank == 0 {
        return Vec::new();
    }
    let cols: Vec<Vec<BigInt>> = m
        .basis()
        .iter()
        .map(|v| l.coordinates(v).expect("dimension").expect("I^(r+1) lies in I^r"))
        .collect();
    let mat = IntMatrix::from_columns(rank, &cols).expect("shape");
    smith_normal_form(&mat)
        .into_iter()
        .map(|f| {
            assert!(f.is_positive(), "quotient of equal-rank lattices is finite");
            f.to_u64().expect("factor divides the group exponent")
        })
        .filter(|&f| f > 1)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationStep {
    pub r: usize,
    /// Invariant factors of `I^r / I^(r+1)`, trivial factors omitted.
    pub invariant_factors: Vec<u64>,
}

impl FiltrationStep {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub group: Vec<u64>,
    pub r_max: usize,
    pub steps: Vec<FiltrationStep>,
    /// `I / I^2` has the invariant factors of the group.
    pub first_quotient_matches_group: bool,
    /// `n_k ([e_k] - [0])` lies in `I^2` for each standard generator `e_k`
    /// of order `n_k`, so `a -> [a] - [0]` induces a surjection
    /// `G -> I / I^2`.
    pub generator_relations_hold: bool,
    /// Smallest `r` from which the computed quotients are all equal, when
    /// at least two of them agree at the end of the range.
    pub stabilization: Option<usize>,
}

impl FiltrationReport {
    /// `I / I^2 = G` as abstract groups, via the generator map.
    pub fn exactness(&self) -> bool {
        self.first_quotient_matches_group && self.generator_relations_hold
    }
}

/// Invariant factors of `I^r / I^(r+1)` for `r = 1..=r_max`.
pub fn aug_filtration(group: &FinAbGroup, r_max: usize) -> Result<FiltrationReport> {
    if group.order() > MAX_GROUP_ORDER {
        return Err(Error::BudgetExceeded(format!("|G| = {} exceeds {MAX_GROUP_ORDER}", group.order())));
    }
    if r_max > MAX_FILTRATION_DEPTH {
        return Err(Error::BudgetExceeded(format!("r_max = {r_max} exceeds {MAX_FILTRATION_DEPTH}")));
    }
    if r_max == 0 {
        return Err(Error::InvalidArgument("r_max must be at least 1".into()));
    }
    let lattices: Vec<LatticeBasis> = (1..=r_max + 1)
        .into_par_iter()
        .map(|r| lattice(group, &ideal_power_generators(group, r)))
        .collect();
    let steps: Vec<FiltrationStep> = (0..r_max)
        .map(|i| FiltrationStep { r: i + 1, invariant_factors: quotient_factors(&lattices[i], &lattices[i + 1]) })
        .collect();
    let first_quotient_matches_group = steps[0].invariant_factors == group.invariant_factors();
    let generator_relations_hold = group.generators().iter().zip(group.invariant_factors()).all(|(&g, &n)| {
        let v = GroupRingElement::augmented(group, g).scale(&BigInt::from(n));
        lattices[1].contains(&v.to_dense()).expect("dimension")
    });
    let last = &steps[r_max - 1].invariant_factors;
    let mut start = r_max;
    while start > 1 && &steps[start - 2].invariant_factors == last {
        start -= 1;
    }
    let stabilization = (start < r_max).then_some(start);
    Ok(FiltrationReport {
        group: group.invariant_factors().to_vec(),
        r_max,
        steps,
        first_quotient_matches_group,
        generator_relations_hold,
        stabilization,
    })
}

#[cfg(test)]
mod tests;
