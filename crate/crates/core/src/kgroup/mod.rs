//! Formal symbol sums `{a_1, ..., a_r}` of points over a prime field, with
//! bilinearity and Weil reciprocity relations assembled into an integer
//! lattice and membership certificates for the relations they imply.

mod relations;
mod skew;

pub use relations::{
    bilinear_relations, bilinear_relations_generating, prove_member, wr_line, wr_vertical, GeneratorCounts,
    Membership, NonMembershipWitness, RelationColumn, RelationKind, RelationLattice, ThirdPoint,
};
pub use skew::{
    phi_r, product_decompose, prove_skew, DecomposedTerm, NegativeControl, ProductDecomposition, ProofKind,
    ProofRecord, SkewProof, SkewReport, MAX_UNIVERSE,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::elliptic::{CurveGroupModP, PointModP};
use crate::error::{Error, Result};
use crate::exactnum::BigInt;

/// A product `E_1(F_q) x ... x E_d(F_q)` of curve groups (`d = 1` for a
/// single curve) with cached addition tables. Elements are indexed in mixed
/// radix over the factors, first factor least significant.
#[derive(Debug, Clone)]
pub struct SlotGroup {
    factors: Vec<CurveGroupModP>,
    add: Vec<Vec<u32>>,
    neg: Vec<Vec<u32>>,
    zero: Vec<u32>,
}

impl PartialEq for SlotGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(x, y)| x.p() == y.p() && x.coefficients() == y.coefficients())
    }
}

impl Eq for SlotGroup {}

impl SlotGroup {
    pub fn curve(g: CurveGroupModP) -> Arc<Self> {
        Self::product(vec![g]).expect("one factor")
    }

    /// All factors must live over the same prime field.
    pub fn product(factors: Vec<CurveGroupModP>) -> Result<Arc<Self>> {
        let Some(first) = factors.first() else {
            return Err(Error::InvalidArgument("a product needs at least one factor".into()));
        };
        if factors.iter().any(|g| g.p() != first.p()) {
            return Err(Error::InvalidConfiguration("factors over different prime fields".into()));
        }
        let mut add = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for g in &factors {
            let pts = g.points();
            let idx = |q: &PointModP| g.index_of(q).expect("closed under the group law") as u32;
            add.push(pts.iter().flat_map(|x| pts.iter().map(move |y| idx(&g.add(x, y)))).collect());
            neg.push(pts.iter().map(|x| idx(&g.negate(x))).collect());
            zero.push(idx(&PointModP::Infinity));
        }
        Ok(Arc::new(SlotGroup { factors, add, neg, zero }))
    }

    pub fn p(&self) -> u64 {
        self.factors[0].p()
    }

    pub fn factors(&self) -> &[CurveGroupModP] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|g| g.points().len()).product()
    }

    fn split(&self, mut i: usize) -> Vec<usize> {
        self.factors
            .iter()
            .map(|g| {
                let n = g.points().len();
                let c = i % n;
                i /= n;
                c
            })
            .collect()
    }

    fn join(&self, parts: &[usize]) -> usize {
        let mut i = 0;
        for (g, &c) in self.factors.iter().zip(parts).rev() {
            i = i * g.points().len() + c;
        }
        i
    }

    /// Coordinates of element `i`, one point per factor.
    pub fn element(&self, i: usize) -> Vec<PointModP> {
        self.split(i).iter().zip(&self.factors).map(|(&c, g)| g.points()[c]).collect()
    }

    pub fn index(&self, coords: &[PointModP]) -> Option<usize> {
        if coords.len() != self.factors.len() {
            return None;
        }
        let parts: Option<Vec<usize>> = coords.iter().zip(&self.factors).map(|(q, g)| g.index_of(q)).collect();
        parts.map(|p| self.join(&p))
    }

    pub fn zero(&self) -> usize {
        self.join(&self.zero.iter().map(|&z| z as usize).collect::<Vec<_>>())
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (x, y) = (self.split(i), self.split(j));
        let parts: Vec<usize> = (0..self.factors.len())
            .map(|k| self.add[k][x[k] * self.factors[k].points().len() + y[k]] as usize)
            .collect();
        self.join(&parts)
    }

    pub fn neg(&self, i: usize) -> usize {
        let parts: Vec<usize> = self.split(i).iter().enumerate().map(|(k, &c)| self.neg[k][c] as usize).collect();
        self.join(&parts)
    }

    /// `epsilon_k`: the point with coordinate `x` in factor `k` and zero
    /// elsewhere.
    pub fn embed(&self, k: usize, x: &PointModP) -> Option<usize> {
        let c = self.factors.get(k)?.index_of(x)?;
        let mut parts: Vec<usize> = self.zero.iter().map(|&z| z as usize).collect();
        parts[k] = c;
        Some(self.join(&parts))
    }

    /// `pr_k`.
    pub fn project(&self, k: usize, i: usize) -> PointModP {
        self.element(i)[k]
    }

    /// Images of the factor generators under the embeddings.
    pub fn generators(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(k, g)| g.generators().iter().map(move |q| self.embed(k, q).expect("generator on curve")))
            .collect()
    }

    pub fn format(&self, i: usize) -> String {
        let e = self.element(i);
        if e.len() == 1 {
            e[0].to_string()
        } else {
            format!("[{}]", e.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("; "))
        }
    }
}

/// One slot of a symbol: the group its points come from and, for tail
/// slots, the fixed point it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub group: Arc<SlotGroup>,
    pub fixed: Option<usize>,
}

impl Slot {
    pub fn free(group: &Arc<SlotGroup>) -> Self {
        Slot { group: group.clone(), fixed: None }
    }

    pub fn fixed(group: &Arc<SlotGroup>, point: usize) -> Self {
        Slot { group: group.clone(), fixed: Some(point) }
    }
}

/// All `r`-tuples of points with the fixed slots held constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolUniverse {
    slots: Vec<Slot>,
    size: usize,
}

impl SymbolUniverse {
    pub fn new(slots: Vec<Slot>) -> Result<Arc<Self>> {
        let Some(first) = slots.first() else {
            return Err(Error::InvalidArgument("symbols need at least one slot".into()));
        };
        if slots.iter().any(|s| s.group.p() != first.group.p()) {
            return Err(Error::InvalidConfiguration("slots over different prime fields".into()));
        }
        let mut size = 1usize;
        for s in &slots {
            match s.fixed {
                Some(x) if x >= s.group.order() => {
                    return Err(Error::InvalidArgument(format!("fixed point index {x} out of range")));
                }
                Some(_) => {}
                None => {
                    size = size
                        .checked_mul(s.group.order())
                        .filter(|&n| n <= MAX_UNIVERSE)
                        .ok_or_else(|| Error::BudgetExceeded(format!("symbol universe exceeds {MAX_UNIVERSE}")))?;
                }
            }
        }
        Ok(Arc::new(SymbolUniverse { slots, size }))
    }

    /// Every slot free.
    pub fn free(groups: &[Arc<SlotGroup>]) -> Result<Arc<Self>> {
        Self::new(groups.iter().map(Slot::free).collect())
    }

    pub fn r(&self) -> usize {
        self.slots.len()
    }

    pub fn q(&self) -> u64 {
        self.slots[0].group.p()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> &Slot {
        &self.slots[i]
    }

    /// Index of the tuple of element indices, if it belongs to the universe.
    pub fn index(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.slots.len() {
            return None;
        }
        let mut idx = 0;
        for (s, &t) in self.slots.iter().zip(tuple).rev() {
            if t >= s.group.order() {
                return None;
            }
            match s.fixed {
                Some(x) if x != t => return None,
                Some(_) => {}
                None => idx = idx * s.group.order() + t,
            }
        }
        Some(idx)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        self.slots
            .iter()
            .map(|s| match s.fixed {
                Some(x) => x,
                None => {
                    let n = s.group.order();
                    let c = idx % n;
                    idx /= n;
                    c
                }
            })
            .collect()
    }

    /// All tuples whose free slots other than `skip` range over their
    /// groups, with `skip` set to zero.
    pub(crate) fn contexts(&self, skip: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, s) in self.slots.iter().enumerate() {
            let choices: Vec<usize> = match s.fixed {
                Some(x) => vec![x],
                None if i == skip => vec![s.group.zero()],
                None => (0..s.group.order()).collect(),
            };
            out = out
                .into_iter()
                .flat_map(|t| {
                    choices.iter().map(move |&c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn format(&self, tuple: &[usize]) -> String {
        let parts: Vec<String> = self.slots.iter().zip(tuple).map(|(s, &t)| s.group.format(t)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// `coefficient * {slots}`, with each slot given by its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolTerm {
    #[serde(serialize_with = "ser_display")]
    pub coefficient: BigInt,
    pub slots: Vec<Vec<PointModP>>,
    pub q: u64,
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// A formal integer combination of symbols in a fixed universe.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolSum {
    universe: Arc<SymbolUniverse>,
    terms: BTreeMap<usize, BigInt>,
}

impl SymbolSum {
    pub fn zero(universe: &Arc<SymbolUniverse>) -> Self {
        SymbolSum { universe: universe.clone(), terms: BTreeMap::new() }
    }

    /// The single symbol with the given element indices.
    pub fn symbol(universe: &Arc<SymbolUniverse>, tuple: &[usize]) -> Result<Self> {
        Self::zero(universe).plus(tuple, &BigInt::from(1))
    }

    /// The single symbol with the given points (one point per factor of
    /// each slot group).
    pub fn symbol_at(universe: &Arc<SymbolUniverse>, points: &[Vec<PointModP>]) -> Result<Self> {
        if points.len() != universe.r() {
            return Err(Error::InvalidArgument(format!("{} slots for r = {}", points.len(), universe.r())));
        }
        let tuple: Option<Vec<usize>> =
            universe.slots.iter().zip(points).map(|(s, q)| s.group.index(q)).collect();
        let tuple = tuple.ok_or_else(|| Error::InvalidArgument("point not on its slot curve".into()))?;
        Self::symbol(universe, &tuple)
    }

    /// Adds `c * {tuple}`.
    pub fn plus(mut self, tuple: &[usize], c: &BigInt) -> Result<Self> {
        let idx = self.universe.index(tuple).ok_or_else(|| {
            Error::InvalidArgument(format!("tuple {tuple:?} is outside the symbol universe"))
        })?;
        let slot = self.terms.entry(idx).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&idx);
        }
        Ok(self)
    }

    pub fn universe(&self) -> &Arc<SymbolUniverse> {
        &self.universe
    }

    fn check_universe(&self, other: &SymbolSum) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::InvalidArgument("symbol sums over different universes".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymbolSum) -> Result<SymbolSum> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out = out.plus(&self.universe.tuple(*k), v)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymbolSum) -> Result<SymbolSum> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> SymbolSum {
        let terms = if c.is_zero() { BTreeMap::new() } else { self.terms.iter().map(|(k, v)| (*k, v * c)).collect() };
        SymbolSum { universe: self.universe.clone(), terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the symbol with the given element indices.
    pub fn coefficient(&self, tuple: &[usize]) -> BigInt {
        self.universe.index(tuple).and_then(|i| self.terms.get(&i).cloned()).unwrap_or_default()
    }

    /// `(element indices, coefficient)` in canonical order.
    pub fn entries(&self) -> Vec<(Vec<usize>, BigInt)> {
        self.terms.iter().map(|(k, v)| (self.universe.tuple(*k), v.clone())).collect()
    }

    pub fn terms(&self) -> Vec<SymbolTerm> {
        self.terms
            .iter()
            .map(|(k, v)| SymbolTerm {
                coefficient: v.clone(),
                slots: self
                    .universe
                    .tuple(*k)
                    .iter()
                    .zip(&self.universe.slots)
                    .map(|(&t, s)| s.group.element(t))
                    .collect(),
                q: self.universe.q(),
            })
            .collect()
    }

    pub fn to_sparse(&self) -> Vec<(usize, BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.universe.size()];
        for (k, c) in &self.terms {
            v[*k] = c.clone();
        }
        v
    }
}

impl fmt::Debug for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolSum(q = {}, r = {}: {self})", self.universe.q(), self.universe.r())
    }
}

impl fmt::Display for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, v)) in self.terms.iter().enumerate() {
            let sym = self.universe.format(&self.universe.tuple(*k));
            let sign = if v < &BigInt::zero() { "-" } else if n > 0 { "+" } else { "" };
            let mag = num_traits::Signed::abs(v);
            let sep = if n > 0 { " " } else { "" };
            if mag == BigInt::from(1) {
                write!(f, "{sep}{sign}{sym}")?;
            } else {
                write!(f, "{sep}{sign}{mag}{sym}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SymbolSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms().serialize(s)
    }
}

#[cfg(test)]
mod tests;
