//! Skew-symmetry certificates, the map `[a] -> {a, ..., a}` and the
//! coordinate expansion of symbols on products of curves.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::relations::{
    bilinear_relations_generating, prove_member, wr_line, wr_vertical, GeneratorCounts, Membership,
    NonMembershipWitness, RelationLattice, ThirdPoint,
};
use super::{Slot, SlotGroup, SymbolSum, SymbolUniverse};
use crate::elliptic::{CurveGroupModP, PointModP};
use crate::error::{Error, Result};
use crate::exactnum::BigInt;

/// Largest symbol universe (`#E(F_q)^r` for [`prove_skew`]) accepted.
pub const MAX_UNIVERSE: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofKind {
    /// `{a1, a2, X} + {a2, a1, X}`.
    Skew,
    /// `2 {a, a, X}`.
    TwoTorsion,
    /// `{a1, a2, X}` alone.
    NegativeControl,
}

/// One membership query, as written to a JSON-lines proof log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofRecord {
    pub kind: ProofKind,
    pub q: u64,
    pub r: usize,
    pub target: String,
    pub derivable: bool,
    pub generator_counts: GeneratorCounts,
    pub certificate_length: usize,
    pub convention: ThirdPoint,
    #[serde(serialize_with = "ser_certificate")]
    pub certificate: Vec<(usize, BigInt)>,
    pub witness: Option<NonMembershipWitness>,
}

fn ser_certificate<S: serde::Serializer>(c: &[(usize, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    c.iter().map(|(k, v)| (*k, v.to_string())).collect::<Vec<_>>().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeControl {
    pub pair: (String, String),
    pub target: String,
    pub witness: NonMembershipWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkewReport {
    pub q: u64,
    pub curve: [u64; 5],
    pub r: usize,
    pub tail: Vec<String>,
    pub convention: ThirdPoint,
    pub universe_size: usize,
    pub generator_counts: GeneratorCounts,
    pub lattice_rank: usize,
    pub pairs: usize,
    pub pairs_proved: usize,
    pub two_torsion: usize,
    pub two_torsion_proved: usize,
    pub max_certificate_length: usize,
    pub negative_control: Option<NegativeControl>,
    pub success: bool,
}

/// The report together with the lattice and every proof record, so
/// certificates can be checked independently.
#[derive(Debug, Clone)]
pub struct SkewProof {
    pub report: SkewReport,
    pub lattice: RelationLattice,
    pub records: Vec<ProofRecord>,
    pub targets: Vec<SymbolSum>,
}

impl SkewProof {
    pub fn to_json_lines(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("serializable") + "\n").collect()
    }
}

/// Certifies `{a1, a2, X} + {a2, a1, X}` and `2 {a, a, X}` for all points of
/// `E(F_q)` from bilinearity in the first two slots and the vertical and
/// line reciprocity relations, with `X` the fixed tail of length `r - 2`
/// (tail points on `E` as well). Also searches for a pair whose lone symbol
/// is provably not derivable.
pub fn prove_skew(curve: &CurveGroupModP, r: usize, tail: &[PointModP], convention: ThirdPoint) -> Result<SkewProof> {
    if r < 2 {
        return Err(Error::InvalidArgument("r must be at least 2".into()));
    }
    if tail.len() != r - 2 {
        return Err(Error::InvalidArgument(format!("r = {r} needs {} tail points, got {}", r - 2, tail.len())));
    }
    let n = curve.order() as usize;
    let mut budget = 1usize;
    for _ in 0..r {
        budget = budget.checked_mul(n).filter(|&b| b <= MAX_UNIVERSE).ok_or_else(|| {
            Error::BudgetExceeded(format!("{n}^{r} symbols exceed the limit of {MAX_UNIVERSE}"))
        })?;
    }
    let g = SlotGroup::curve(curve.clone());
    let tail_idx: Vec<usize> = tail
        .iter()
        .map(|t| g.index(&[*t]).ok_or_else(|| Error::InvalidArgument(format!("tail point {t} is not on the curve"))))
        .collect::<Result<_>>()?;
    let mut slots = vec![Slot::free(&g), Slot::free(&g)];
    slots.extend(tail_idx.iter().map(|&t| Slot::fixed(&g, t)));
    let u = SymbolUniverse::new(slots)?;

    let mut columns = bilinear_relations_generating(&u, 0)?;
    columns.extend(bilinear_relations_generating(&u, 1)?);
    let verticals: Vec<_> = (0..n).into_par_iter().map(|a| wr_vertical(&u, a, &tail_idx)).collect::<Result<_>>()?;
    columns.extend(verticals);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let lines: Vec<_> =
        pairs.par_iter().map(|&(a, b)| wr_line(&u, a, b, &tail_idx, convention)).collect::<Result<_>>()?;
    columns.extend(lines);
    let lattice = RelationLattice::new(&u, columns)?;
    let counts = lattice.counts();

    let sym = |a: usize, b: usize| {
        let mut t = vec![a, b];
        t.extend_from_slice(&tail_idx);
        SymbolSum::symbol(&u, &t).expect("tuple in universe")
    };
    let mut queries: Vec<(ProofKind, SymbolSum)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            queries.push((ProofKind::Skew, sym(a, b).add(&sym(b, a)).expect("same universe")));
        }
    }
    for a in 0..n {
        queries.push((ProofKind::TwoTorsion, sym(a, a).scale(&BigInt::from(2))));
    }
    let results: Vec<Membership> =
        queries.par_iter().map(|(_, t)| prove_member(t, &lattice)).collect::<Result<_>>()?;

    let zero = g.zero();
    let mut negative_control = None;
    let mut negative_record = None;
    'search: for a in (0..n).filter(|&a| a != zero) {
        for b in (0..n).filter(|&b| b != zero && b != a) {
            let t = sym(a, b);
            if let Membership::NotDerivable(w) = prove_member(&t, &lattice)? {
                negative_control = Some(NegativeControl {
                    pair: (g.format(a), g.format(b)),
                    target: t.to_string(),
                    witness: w.clone(),
                });
                negative_record = Some((t, Membership::NotDerivable(w)));
                break 'search;
            }
        }
    }

    let mut records = Vec::new();
    let mut targets = Vec::new();
    let labelled = queries.into_iter().zip(results).map(|((k, t), m)| (k, t, m));
    let negative = negative_record.map(|(t, m)| (ProofKind::NegativeControl, t, m));
    for (kind, target, m) in labelled.chain(negative) {
        let (certificate, witness) = match m {
            Membership::Derivable(c) => (c, None),
            Membership::NotDerivable(w) => (Vec::new(), Some(w)),
        };
        records.push(ProofRecord {
            kind,
            q: curve.p(),
            r,
            target: target.to_string(),
            derivable: witness.is_none(),
            generator_counts: counts,
            certificate_length: certificate.len(),
            convention,
            certificate,
            witness,
        });
        targets.push(target);
    }
    let count = |k: ProofKind, proved: bool| {
        records.iter().filter(|r| r.kind == k && (!proved || r.derivable)).count()
    };
    let report = SkewReport {
        q: curve.p(),
        curve: curve.coefficients(),
        r,
        tail: tail.iter().map(|t| t.to_string()).collect(),
        convention,
        universe_size: u.size(),
        generator_counts: counts,
        lattice_rank: lattice.rank(),
        pairs: count(ProofKind::Skew, false),
        pairs_proved: count(ProofKind::Skew, true),
        two_torsion: count(ProofKind::TwoTorsion, false),
        two_torsion_proved: count(ProofKind::TwoTorsion, true),
        max_certificate_length: records.iter().map(|r| r.certificate_length).max().unwrap_or(0),
        negative_control,
        success: false,
    };
    let success = report.pairs == report.pairs_proved && report.two_torsion == report.two_torsion_proved;
    Ok(SkewProof { report: SkewReport { success, ..report }, lattice, records, targets })
}

/// Linear extension of `[a] -> {a, ..., a}` on a universe whose slots are
/// all free and carry the same group. `cycle` lists `(element, multiplicity)`.
pub fn phi_r(u: &Arc<SymbolUniverse>, cycle: &[(usize, BigInt)]) -> Result<SymbolSum> {
    let g = &u.slot(0).group;
    if u.slots().iter().any(|s| s.fixed.is_some() || &s.group != g) {
        return Err(Error::InvalidConfiguration("phi_r needs r free slots on one group".into()));
    }
    cycle.iter().try_fold(SymbolSum::zero(u), |acc, (a, m)| acc.plus(&vec![*a; u.r()], m))
}

/// One term `{epsilon_{i_1}(x_1), ..., epsilon_{i_r}(x_r)}` of the expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposedTerm {
    /// Factor index `i_j` chosen in each slot.
    pub factors: Vec<usize>,
    /// `x_j = pr_{i_j}(P_j)`.
    pub points: Vec<PointModP>,
    /// `epsilon_{i_j}(x_j)` as elements of the slot groups.
    pub embedded: Vec<usize>,
    /// `pr_{i_j}(epsilon_{i_j}(x_j)) = x_j` in every slot.
    pub round_trip: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDecomposition {
    pub symbol: Vec<usize>,
    /// Terms with a zero coordinate are omitted; they vanish by linearity.
    pub terms: Vec<DecomposedTerm>,
    pub round_trip: bool,
}

impl ProductDecomposition {
    /// `sum_terms {epsilon(x_1), ..., epsilon(x_r)}`.
    pub fn reembedded(&self, u: &Arc<SymbolUniverse>) -> Result<SymbolSum> {
        self.terms.iter().try_fold(SymbolSum::zero(u), |acc, t| acc.plus(&t.embedded, &BigInt::from(1)))
    }
}

/// Expands a symbol on products of curves by writing each point as
/// `sum_i epsilon_i(x_i)`.
pub fn product_decompose(u: &Arc<SymbolUniverse>, symbol: &[usize]) -> Result<ProductDecomposition> {
    if u.index(symbol).is_none() {
        return Err(Error::InvalidArgument("symbol outside the universe".into()));
    }
    let mut choices: Vec<Vec<(usize, PointModP)>> = Vec::new();
    for (s, &p) in u.slots().iter().zip(symbol) {
        let coords = s.group.element(p);
        choices.push(coords.into_iter().enumerate().filter(|(_, x)| !x.is_infinity()).collect());
    }
    let mut combos: Vec<Vec<(usize, PointModP)>> = vec![Vec::new()];
    for c in &choices {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |&pick| {
                    let mut next = prefix.clone();
                    next.push(pick);
                    next
                })
            })
            .collect();
    }
    let terms: Vec<DecomposedTerm> = combos
        .into_iter()
        .map(|combo| {
            let embedded: Vec<usize> = combo
                .iter()
                .zip(u.slots())
                .map(|(&(i, x), s)| s.group.embed(i, &x).expect("coordinate on its factor"))
                .collect();
            let round_trip =
                combo.iter().zip(&embedded).zip(u.slots()).all(|((&(i, x), &e), s)| s.group.project(i, e) == x);
            DecomposedTerm {
                factors: combo.iter().map(|c| c.0).collect(),
                points: combo.iter().map(|c| c.1).collect(),
                embedded,
                round_trip,
            }
        })
        .collect();
    let round_trip = terms.iter().all(|t| t.round_trip);
    Ok(ProductDecomposition { symbol: symbol.to_vec(), terms, round_trip })
}
