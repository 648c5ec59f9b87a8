//! Relation generators and lattice membership.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{SymbolSum, SymbolUniverse};
use crate::error::{Error, Result};
use crate::exactnum::{smith_decomposition, BigInt, IntMatrix, LatticeBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `{.., a + a', ..} - {.., a, ..} - {.., a', ..}`.
    Bilinear,
    /// Divisor of `x - x(a)` on the curve of the first two slots.
    WrVertical,
    /// Divisor of the line through `a1` and `a2`.
    WrLine,
}

/// Which point of `E` the line through `a1`, `a2` is taken to meet third.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThirdPoint {
    /// `-(a1 + a2)`, the chord-law intersection.
    NegatedSum,
    /// `a1 + a2`.
    Sum,
}

/// One relation vector with the data it was instantiated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationColumn {
    pub kind: RelationKind,
    /// Slot varied by a bilinear relation; `0` for reciprocity relations.
    pub slot: usize,
    /// Element indices `(a, a')`, `(a)` or `(a1, a2)`.
    pub inputs: Vec<usize>,
    /// Full tuple with the varied slots set to zero.
    pub context: Vec<usize>,
    pub convention: Option<ThirdPoint>,
    pub vector: SymbolSum,
}

fn check_free(u: &SymbolUniverse, slot: usize) -> Result<()> {
    if slot >= u.r() {
        return Err(Error::InvalidArgument(format!("slot {slot} out of range for r = {}", u.r())));
    }
    if u.slot(slot).fixed.is_some() {
        return Err(Error::InvalidConfiguration(format!("slot {slot} is fixed")));
    }
    Ok(())
}

fn bilinear_column(u: &Arc<SymbolUniverse>, slot: usize, a: usize, b: usize, ctx: &[usize]) -> RelationColumn {
    let g = &u.slot(slot).group;
    let at = |x: usize| {
        let mut t = ctx.to_vec();
        t[slot] = x;
        t
    };
    let one = BigInt::from(1);
    let vector = SymbolSum::zero(u)
        .plus(&at(g.add(a, b)), &one)
        .and_then(|s| s.plus(&at(a), &-&one))
        .and_then(|s| s.plus(&at(b), &-&one))
        .expect("tuples in universe");
    RelationColumn { kind: RelationKind::Bilinear, slot, inputs: vec![a, b], context: ctx.to_vec(), convention: None, vector }
}

fn bilinear_family(u: &Arc<SymbolUniverse>, slot: usize, increments: &[usize]) -> Result<Vec<RelationColumn>> {
    check_free(u, slot)?;
    let n = u.slot(slot).group.order();
    let contexts = u.contexts(slot);
    Ok(contexts
        .par_iter()
        .flat_map_iter(|ctx| {
            (0..n).flat_map(move |a| increments.iter().map(move |&b| bilinear_column(u, slot, a, b, ctx)))
        })
        .collect())
}

/// Linearity in `slot`: one column for every pair `(a, a')` and every
/// assignment of the other free slots.
pub fn bilinear_relations(u: &Arc<SymbolUniverse>, slot: usize) -> Result<Vec<RelationColumn>> {
    check_free(u, slot)?;
    let all: Vec<usize> = (0..u.slot(slot).group.order()).collect();
    bilinear_family(u, slot, &all)
}

/// As [`bilinear_relations`] with `a'` restricted to the standard
/// generators of the slot group. Spans the same lattice.
pub fn bilinear_relations_generating(u: &Arc<SymbolUniverse>, slot: usize) -> Result<Vec<RelationColumn>> {
    check_free(u, slot)?;
    let gens = u.slot(slot).group.generators();
    bilinear_family(u, slot, &gens)
}

fn reciprocity_tuple(u: &SymbolUniverse, tail: &[usize]) -> Result<Vec<usize>> {
    if u.r() < 2 || tail.len() != u.r() - 2 {
        return Err(Error::InvalidConfiguration(format!(
            "reciprocity relations need r >= 2 and a tail of length r - 2, got r = {} and {} tail points",
            u.r(),
            tail.len()
        )));
    }
    let (s0, s1) = (u.slot(0), u.slot(1));
    if s0.fixed.is_some() || s1.fixed.is_some() {
        return Err(Error::InvalidConfiguration("the first two slots must be free".into()));
    }
    if s0.group != s1.group || s0.group.factors().len() != 1 {
        return Err(Error::InvalidConfiguration("the first two slots must carry the same curve".into()));
    }
    let z = s0.group.zero();
    let mut t = vec![z, z];
    t.extend_from_slice(tail);
    if u.index(&t).is_none() {
        return Err(Error::InvalidArgument("tail is outside the symbol universe".into()));
    }
    Ok(t)
}

fn diagonal_sum(u: &Arc<SymbolUniverse>, ctx: &[usize], terms: &[(usize, i64)]) -> SymbolSum {
    terms.iter().fold(SymbolSum::zero(u), |acc, &(x, c)| {
        let mut t = ctx.to_vec();
        t[0] = x;
        t[1] = x;
        acc.plus(&t, &BigInt::from(c)).expect("tuple in universe")
    })
}

/// `{a, a, X} + {-a, -a, X} - 2 {0, 0, X}`.
pub fn wr_vertical(u: &Arc<SymbolUniverse>, a: usize, tail: &[usize]) -> Result<RelationColumn> {
    let ctx = reciprocity_tuple(u, tail)?;
    let g = &u.slot(0).group;
    if a >= g.order() {
        return Err(Error::InvalidArgument(format!("point index {a} out of range")));
    }
    let vector = diagonal_sum(u, &ctx, &[(a, 1), (g.neg(a), 1), (g.zero(), -2)]);
    Ok(RelationColumn { kind: RelationKind::WrVertical, slot: 0, inputs: vec![a], context: ctx, convention: None, vector })
}

/// `{a1, a1, X} + {a2, a2, X} + {s, s, X} - 3 {0, 0, X}` with `s` the third
/// point under `convention`.
pub fn wr_line(u: &Arc<SymbolUniverse>, a1: usize, a2: usize, tail: &[usize], convention: ThirdPoint) -> Result<RelationColumn> {
    let ctx = reciprocity_tuple(u, tail)?;
    let g = &u.slot(0).group;
    if a1 >= g.order() || a2 >= g.order() {
        return Err(Error::InvalidArgument("point index out of range".into()));
    }
    let sum = g.add(a1, a2);
    let s = match convention {
        ThirdPoint::NegatedSum => g.neg(sum),
        ThirdPoint::Sum => sum,
    };
    let vector = diagonal_sum(u, &ctx, &[(a1, 1), (a2, 1), (s, 1), (g.zero(), -3)]);
    Ok(RelationColumn {
        kind: RelationKind::WrLine,
        slot: 0,
        inputs: vec![a1, a2],
        context: ctx,
        convention: Some(convention),
        vector,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GeneratorCounts {
    pub bilinear: usize,
    pub wr_vertical: usize,
    pub wr_line: usize,
}

impl GeneratorCounts {
    pub fn total(&self) -> usize {
        self.bilinear + self.wr_vertical + self.wr_line
    }
}

/// Relation columns over one universe, prepared for membership queries.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    universe: Arc<SymbolUniverse>,
    columns: Vec<RelationColumn>,
    lattice: LatticeBasis,
}

impl RelationLattice {
    pub fn new(universe: &Arc<SymbolUniverse>, columns: Vec<RelationColumn>) -> Result<Self> {
        if columns.iter().any(|c| c.vector.universe() != universe) {
            return Err(Error::InvalidArgument("relation column from a different universe".into()));
        }
        let sparse = columns.iter().map(|c| c.vector.to_sparse()).collect();
        let lattice = LatticeBasis::from_sparse_columns(universe.size(), sparse)?;
        Ok(RelationLattice { universe: universe.clone(), columns, lattice })
    }

    pub fn universe(&self) -> &Arc<SymbolUniverse> {
        &self.universe
    }

    pub fn columns(&self) -> &[RelationColumn] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn counts(&self) -> GeneratorCounts {
        let mut c = GeneratorCounts::default();
        for col in &self.columns {
            match col.kind {
                RelationKind::Bilinear => c.bilinear += 1,
                RelationKind::WrVertical => c.wr_vertical += 1,
                RelationKind::WrLine => c.wr_line += 1,
            }
        }
        c
    }

    /// `sum coeff * column`.
    pub fn combination(&self, certificate: &[(usize, BigInt)]) -> SymbolSum {
        certificate.iter().fold(SymbolSum::zero(&self.universe), |acc, (k, c)| {
            acc.add(&self.columns[*k].vector.scale(c)).expect("same universe")
        })
    }
}

/// A linear functional `w` with `w . column = 0 (mod m)` for every column
/// and `w . target != 0 (mod m)`; `m = 0` means exact equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonMembershipWitness {
    pub functional: Vec<(usize, BigInt)>,
    pub modulus: BigInt,
}

impl NonMembershipWitness {
    pub fn evaluate(&self, s: &SymbolSum) -> BigInt {
        let dense = s.to_dense();
        self.functional.iter().map(|(i, w)| w * &dense[*i]).sum()
    }

    /// `v` reduced modulo the witness modulus (unchanged when it is 0).
    pub fn reduce(&self, v: &BigInt) -> BigInt {
        if self.modulus.is_zero() {
            v.clone()
        } else {
            num_integer::Integer::mod_floor(v, &self.modulus)
        }
    }
}

impl Serialize for NonMembershipWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let f: Vec<(usize, String)> = self.functional.iter().map(|(i, v)| (*i, v.to_string())).collect();
        let mut st = s.serialize_struct("NonMembershipWitness", 2)?;
        st.serialize_field("functional", &f)?;
        st.serialize_field("modulus", &self.modulus.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `(column index, coefficient)` with `sum coeff * column = target`.
    Derivable(Vec<(usize, BigInt)>),
    NotDerivable(NonMembershipWitness),
}

impl Membership {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Membership::Derivable(_))
    }

    pub fn certificate(&self) -> Option<&[(usize, BigInt)]> {
        match self {
            Membership::Derivable(c) => Some(c),
            Membership::NotDerivable(_) => None,
        }
    }
}

fn witness(lattice: &RelationLattice, target: &SymbolSum) -> NonMembershipWitness {
    let dim = lattice.universe.size();
    let basis = lattice.lattice.basis();
    let m = if basis.is_empty() {
        IntMatrix::zeros(dim, 1)
    } else {
        IntMatrix::from_columns(dim, &basis).expect("basis vectors have the universe length")
    };
    let snf = smith_decomposition(&m);
    let t = target.to_dense();
    let y = snf.u.mul_vec(&t).expect("shape");
    let d = &snf.invariant_factors;
    let row = (0..dim)
        .find(|&i| {
            let di = d.get(i).cloned().unwrap_or_default();
            if di.is_zero() {
                !y[i].is_zero()
            } else {
                !(&y[i] % &di).is_zero()
            }
        })
        .expect("target outside the lattice has an obstruction");
    let modulus = d.get(row).cloned().unwrap_or_default().abs();
    let functional = snf.u.row(row).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
    NonMembershipWitness { functional, modulus }
}

/// Membership of `target` in the span of the relation columns, with an
/// exactly re-verified certificate or an obstruction.
pub fn prove_member(target: &SymbolSum, lattice: &RelationLattice) -> Result<Membership> {
    if target.universe() != &lattice.universe {
        return Err(Error::InvalidArgument("target and lattice have different universes".into()));
    }
    match lattice.lattice.solve(&target.to_dense())? {
        Some(cert) => {
            assert_eq!(&lattice.combination(&cert), target, "certificate failed re-verification");
            Ok(Membership::Derivable(cert))
        }
        None => {
            let w = witness(lattice, target);
            assert!(!w.reduce(&w.evaluate(target)).is_zero(), "witness does not separate the target");
            assert!(
                lattice.columns.iter().all(|c| w.reduce(&w.evaluate(&c.vector)).is_zero()),
                "witness does not vanish on the relations"
            );
            Ok(Membership::NotDerivable(w))
        }
    }
}
