//! Parallel search over parameter grids.

use std::collections::HashSet;
use std::io::Read;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_scholten, verify_split_jacobian, ScholtenCurve};
use crate::checkers::main1_check;
use crate::error::{Error, Result};
use crate::exactnum::BigInt;
use crate::genus2::{AbsoluteKey, IgusaClebsch};

const CHUNK: usize = 4096;

/// Inclusive ranges for `a, b, c, d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRanges {
    pub a: RangeInclusive<i64>,
    pub b: RangeInclusive<i64>,
    pub c: RangeInclusive<i64>,
    pub d: RangeInclusive<i64>,
}

impl SearchRanges {
    /// `|a|, |b|, |c|, |d| <= k`.
    pub fn symmetric(k: i64) -> Self {
        SearchRanges { a: -k..=k, b: -k..=k, c: -k..=k, d: -k..=k }
    }

    /// The grid in lexicographic order.
    pub fn grid(&self) -> impl Iterator<Item = [BigInt; 4]> + '_ {
        self.a.clone().flat_map(move |a| {
            self.b.clone().flat_map(move |b| {
                self.c.clone().flat_map(move |c| {
                    self.d.clone().map(move |d| [a, b, c, d].map(BigInt::from))
                })
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum SearchPredicate {
    /// At most one factor with potentially good supersingular reduction at
    /// the given odd prime.
    Main1At(u64),
    /// [`verify_split_jacobian`] passes on the given primes.
    SplitJacobian(Vec<u64>),
}

impl SearchPredicate {
    pub fn holds(&self, c: &ScholtenCurve) -> bool {
        match self {
            SearchPredicate::Main1At(p) => {
                let (Some(e1), Some(e2)) = (c.e1(), c.e2()) else { return false };
                main1_check(&[e1.model(), e2.model()], *p).verdict.is_met()
            }
            SearchPredicate::SplitJacobian(primes) => {
                verify_split_jacobian(c, primes).is_ok_and(|cert| cert.verdict)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SearchPredicate::Main1At(p) => format!("main1@{p}"),
            SearchPredicate::SplitJacobian(primes) => format!("split-jacobian({} primes)", primes.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchRecord {
    pub curve: ScholtenCurve,
    pub igusa_clebsch: IgusaClebsch,
    pub class_key: AbsoluteKey,
    pub predicates: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub candidates: usize,
    pub smooth: usize,
    pub passing: usize,
    /// Records emitted, one per geometric Igusa class.
    pub emitted: usize,
}

fn evaluate(params: &[BigInt; 4], predicates: &[SearchPredicate]) -> (bool, Option<SearchRecord>) {
    let [a, b, c, d] = params;
    let s = build_scholten(a, b, c, d);
    let Some(curve) = s.curve() else { return (false, None) };
    if !predicates.iter().all(|p| p.holds(&s)) {
        return (true, None);
    }
    let igusa_clebsch = curve.igusa_clebsch().expect("smooth");
    let class_key = igusa_clebsch.absolute_key();
    let predicates = predicates.iter().map(SearchPredicate::label).collect();
    (true, Some(SearchRecord { curve: s, igusa_clebsch, class_key, predicates }))
}

/// Evaluates the grid in parallel and feeds the first smooth, passing
/// member of each Igusa class to `sink`, in grid order.
pub fn parameter_search<I, F>(grid: I, predicates: &[SearchPredicate], mut sink: F) -> Result<SearchSummary>
where
    I: IntoIterator<Item = [BigInt; 4]>,
    F: FnMut(SearchRecord) -> Result<()>,
{
    let mut summary = SearchSummary::default();
    let mut seen: HashSet<AbsoluteKey> = HashSet::new();
    let mut grid = grid.into_iter().peekable();
    while grid.peek().is_some() {
        let chunk: Vec<[BigInt; 4]> = grid.by_ref().take(CHUNK).collect();
        summary.candidates += chunk.len();
        let results: Vec<(bool, Option<SearchRecord>)> =
            chunk.par_iter().map(|params| evaluate(params, predicates)).collect();
        for (smooth, record) in results {
            summary.smooth += smooth as usize;
            let Some(record) = record else { continue };
            summary.passing += 1;
            if seen.insert(record.class_key.clone()) {
                summary.emitted += 1;
                sink(record)?;
            }
        }
    }
    Ok(summary)
}

/// Reads quadruples from CSV with header `a,b,c,d`.
pub fn read_parameter_grid<R: Read>(reader: R) -> Result<Vec<[BigInt; 4]>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::InvalidArgument(format!("grid header: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["a", "b", "c", "d"] {
        return Err(Error::InvalidArgument(format!("grid header must be a,b,c,d, got {:?}", headers)));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::InvalidArgument(format!("grid row {}: {e}", line + 1)))?;
        if rec.len() != 4 {
            return Err(Error::InvalidArgument(format!("grid row {}: expected 4 fields", line + 1)));
        }
        let mut q: [BigInt; 4] = Default::default();
        for (slot, field) in q.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("grid row {}: bad integer {field:?}", line + 1)))?;
        }
        out.push(q);
    }
    Ok(out)
}
