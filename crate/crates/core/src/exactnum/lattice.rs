//! Integer lattice membership with certificates.
//!
//! Generators are first eliminated sparsely against `+-1` pivots, chosen to
//! limit fill-in. Whatever survives is inserted into a row-echelon basis
//! over the integers (Hermite-style elimination with extended-gcd pivot
//! merges). Every elimination step is logged, so a successful membership
//! query yields an explicit integer combination of generators, which is
//! re-verified before it is returned. A failed query is exact: reduction
//! leaves a nonzero residue iff the target is not in the lattice.
//!
//! Arithmetic runs on `i64` with overflow checks and restarts on `BigInt`
//! when a value leaves that range.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;
use crate::error::{invalid, Result};

type Sparse<T> = Vec<(usize, T)>;

#[derive(Debug)]
struct Overflow;

trait Scalar: Clone + PartialEq + Debug + Sized {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    /// `s * x + t * y`
    fn lin(s: &Self, x: &Self, t: &Self, y: &Self) -> Option<Self>;
    /// `Some(x / d)` if `d` divides `x` exactly.
    fn exact_quotient(x: &Self, d: &Self) -> Option<Option<Self>>;
    /// `(g, s, t)` with `g = s*a + t*b`, `g > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn div_exact(x: &Self, d: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn lin(s: &Self, x: &Self, t: &Self, y: &Self) -> Option<Self> {
        s.checked_mul(*x)?.checked_add(t.checked_mul(*y)?)
    }
    fn exact_quotient(x: &Self, d: &Self) -> Option<Option<Self>> {
        if x.checked_rem(*d)? == 0 {
            Some(Some(x.checked_div(*d)?))
        } else {
            Some(None)
        }
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g.try_into().ok()?, s.try_into().ok()?, t.try_into().ok()?))
    }
    fn div_exact(x: &Self, d: &Self) -> Self {
        x / d
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn lin(s: &Self, x: &Self, t: &Self, y: &Self) -> Option<Self> {
        Some(s * x + t * y)
    }
    fn exact_quotient(x: &Self, d: &Self) -> Option<Option<Self>> {
        let (q, r) = x.div_rem(d);
        Some(if Zero::is_zero(&r) { Some(q) } else { None })
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(x: &Self, d: &Self) -> Self {
        x / d
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

#[derive(Debug, Clone)]
struct BasisVec<T> {
    entries: Vec<T>,
    combo: Sparse<T>,
}

#[derive(Debug, Clone)]
struct Echelon<T> {
    dim: usize,
    slot: Vec<Option<usize>>,
    vecs: Vec<BasisVec<T>>,
}

fn combo_axpy<T: Scalar>(acc: &Sparse<T>, q: &T, other: &Sparse<T>) -> Option<Sparse<T>> {
    // acc - q * other, both sorted by generator index
    let mut out = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < other.len() {
        let take_left = j == other.len() || (i < acc.len() && acc[i].0 < other[j].0);
        let take_right = i == acc.len() || (j < other.len() && other[j].0 < acc[i].0);
        if take_left {
            out.push(acc[i].clone());
            i += 1;
        } else if take_right {
            let v = T::nil().sub_mul(q, &other[j].1)?;
            if !v.is_nil() {
                out.push((other[j].0, v));
            }
            j += 1;
        } else {
            let v = acc[i].1.sub_mul(q, &other[j].1)?;
            if !v.is_nil() {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn combo_lin<T: Scalar>(s: &T, x: &Sparse<T>, t: &T, y: &Sparse<T>) -> Option<Sparse<T>> {
    // s*x + t*y = s*x - (-t)*y
    let scaled: Sparse<T> = x
        .iter()
        .map(|(k, v)| Some((*k, T::lin(s, v, &T::nil(), &T::nil())?)))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .filter(|(_, v)| !v.is_nil())
        .collect();
    combo_axpy(&scaled, &t.neg()?, y)
}

impl<T: Scalar> Echelon<T> {
    fn new(dim: usize) -> Self {
        Self { dim, slot: vec![None; dim], vecs: Vec::new() }
    }

    fn sub_row_tail(c: &mut [T], b: &[T], from: usize, q: &T) -> Option<()> {
        for k in from..c.len() {
            if !b[k].is_nil() {
                c[k] = c[k].sub_mul(q, &b[k])?;
            }
        }
        Some(())
    }

    fn insert(&mut self, index: usize, start: Vec<T>) -> std::result::Result<(), Overflow> {
        if self.reduces_without_change(start.clone())? {
            return Ok(());
        }
        let mut c = start;
        let mut combo: Sparse<T> = vec![(index, T::unit())];
        for row in 0..self.dim {
            if c[row].is_nil() {
                continue;
            }
            let Some(k) = self.slot[row] else {
                self.slot[row] = Some(self.vecs.len());
                self.vecs.push(BasisVec { entries: c, combo });
                return Ok(());
            };
            let b = &self.vecs[k];
            let bp = b.entries[row].clone();
            match T::exact_quotient(&c[row], &bp).ok_or(Overflow)? {
                Some(q) => {
                    Self::sub_row_tail(&mut c, &b.entries, row, &q).ok_or(Overflow)?;
                    combo = combo_axpy(&combo, &q, &b.combo).ok_or(Overflow)?;
                }
                None => {
                    let cr = c[row].clone();
                    let (g, s, t) = T::ext_gcd(&bp, &cr).ok_or(Overflow)?;
                    let u = T::div_exact(&cr, &g);
                    let w = T::div_exact(&bp, &g);
                    let mut nb = vec![T::nil(); self.dim];
                    let mut nc = vec![T::nil(); self.dim];
                    for i in row..self.dim {
                        nb[i] = T::lin(&s, &b.entries[i], &t, &c[i]).ok_or(Overflow)?;
                        nc[i] = T::lin(&u, &b.entries[i], &w.neg().ok_or(Overflow)?, &c[i])
                            .ok_or(Overflow)?;
                    }
                    let nb_combo = combo_lin(&s, &b.combo, &t, &combo).ok_or(Overflow)?;
                    let nc_combo =
                        combo_lin(&u, &b.combo, &w.neg().ok_or(Overflow)?, &combo).ok_or(Overflow)?;
                    self.vecs[k] = BasisVec { entries: nb, combo: nb_combo };
                    c = nc;
                    combo = nc_combo;
                }
            }
        }
        Ok(())
    }

    fn reduces_without_change(&self, mut c: Vec<T>) -> std::result::Result<bool, Overflow> {
        for row in 0..self.dim {
            if c[row].is_nil() {
                continue;
            }
            let Some(k) = self.slot[row] else {
                return Ok(false);
            };
            let b = &self.vecs[k];
            match T::exact_quotient(&c[row], &b.entries[row]).ok_or(Overflow)? {
                Some(q) => Self::sub_row_tail(&mut c, &b.entries, row, &q).ok_or(Overflow)?,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Multipliers `(basis vector, q)` with `target = sum q * basis`, or
    /// `None` when the target is not in the lattice.
    fn reduce(&self, mut c: Vec<T>) -> std::result::Result<Option<Sparse<T>>, Overflow> {
        let mut mult = Vec::new();
        for row in 0..self.dim {
            if c[row].is_nil() {
                continue;
            }
            let Some(k) = self.slot[row] else {
                return Ok(None);
            };
            let b = &self.vecs[k];
            match T::exact_quotient(&c[row], &b.entries[row]).ok_or(Overflow)? {
                Some(q) => {
                    Self::sub_row_tail(&mut c, &b.entries, row, &q).ok_or(Overflow)?;
                    mult.push((k, q));
                }
                None => return Ok(None),
            }
        }
        Ok(Some(mult))
    }

    fn certificate(&self, mult: &Sparse<T>) -> std::result::Result<BTreeMap<usize, T>, Overflow> {
        let mut acc: BTreeMap<usize, T> = BTreeMap::new();
        for (k, q) in mult {
            for (g, v) in &self.vecs[*k].combo {
                let e = acc.entry(*g).or_insert_with(T::nil);
                *e = T::lin(&T::unit(), e, q, v).ok_or(Overflow)?;
            }
        }
        Ok(acc)
    }

    fn pivot_order(&self) -> Vec<usize> {
        self.slot.iter().flatten().copied().collect()
    }
}

/// A vector eliminated against a unit pivot: `entries` equals generator
/// `base` minus `sum q * pivot[j]` over `steps`.
#[derive(Debug, Clone)]
struct Derived<T> {
    base: usize,
    entries: Sparse<T>,
    steps: Sparse<T>,
}

/// Sparse elimination on `+-1` pivots first, then the echelon on what is left.
#[derive(Debug, Clone)]
struct Presolved<T> {
    dim: usize,
    /// Pivot vectors in elimination order with their pivot rows; each has
    /// zeros on the pivot rows of earlier pivots.
    pivots: Vec<(usize, Derived<T>)>,
    residual: Vec<Derived<T>>,
    echelon: Echelon<T>,
}

fn is_unit<T: Scalar>(x: &T) -> bool {
    *x == T::unit() || T::nil().sub_mul(&T::unit(), &T::unit()).as_ref() == Some(x)
}

fn entry_at<T: Scalar>(v: &Sparse<T>, row: usize) -> Option<&T> {
    v.binary_search_by_key(&row, |(i, _)| *i).ok().map(|k| &v[k].1)
}

impl<T: Scalar> Presolved<T> {
    fn build(dim: usize, gens: &[Vec<(usize, BigInt)>]) -> std::result::Result<Self, Overflow> {
        let mut active: Vec<Option<Derived<T>>> = Vec::with_capacity(gens.len());
        let mut by_row: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); dim];
        for (k, g) in gens.iter().enumerate() {
            let entries =
                g.iter().map(|(i, v)| Some((*i, T::from_big(v)?))).collect::<Option<Sparse<T>>>().ok_or(Overflow)?;
            for (i, _) in &entries {
                by_row[*i].insert(k);
            }
            active.push((!entries.is_empty()).then(|| Derived { base: k, entries, steps: Vec::new() }));
        }
        let mut pivots = Vec::new();
        while let Some((id, row)) = Self::choose_pivot(&active, &by_row) {
            let pivot = active[id].take().expect("chosen vector is active");
            for (i, _) in &pivot.entries {
                by_row[*i].remove(&id);
            }
            let e = entry_at(&pivot.entries, row).expect("pivot entry").clone();
            let touched: Vec<usize> = by_row[row].iter().copied().collect();
            let j = pivots.len();
            for other in touched {
                let v = active[other].as_mut().expect("indexed vector is active");
                // e = +-1, so x / e = x * e
                let q = T::lin(entry_at(&v.entries, row).expect("indexed entry"), &e, &T::nil(), &T::nil())
                    .ok_or(Overflow)?;
                v.entries = combo_axpy(&v.entries, &q, &pivot.entries).ok_or(Overflow)?;
                v.steps.push((j, q));
                for (i, _) in &pivot.entries {
                    if entry_at(&v.entries, *i).is_some() {
                        by_row[*i].insert(other);
                    } else {
                        by_row[*i].remove(&other);
                    }
                }
                if v.entries.is_empty() {
                    active[other] = None;
                }
            }
            pivots.push((row, pivot));
        }
        let residual: Vec<Derived<T>> = active.into_iter().flatten().collect();
        let mut echelon = Echelon::new(dim);
        for (k, r) in residual.iter().enumerate() {
            let mut dense = vec![T::nil(); dim];
            for (i, v) in &r.entries {
                dense[*i] = v.clone();
            }
            echelon.insert(k, dense)?;
        }
        Ok(Self { dim, pivots, residual, echelon })
    }

    /// Unit entry minimising `(vector length - 1) * (row count - 1)`.
    fn choose_pivot(active: &[Option<Derived<T>>], by_row: &[BTreeSet<usize>]) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (id, v) in active.iter().enumerate() {
            let Some(v) = v else { continue };
            let len = v.entries.len() - 1;
            if best.is_some_and(|(cost, _, _)| cost == 0) {
                break;
            }
            for (row, x) in &v.entries {
                if !is_unit(x) {
                    continue;
                }
                let cost = len * (by_row[*row].len() - 1);
                if best.map_or(true, |(c, _, _)| cost < c) {
                    best = Some((cost, id, *row));
                }
            }
        }
        best.map(|(_, id, row)| (id, row))
    }

    /// Strips the pivot rows from `c`, returning the pivot multipliers.
    fn reduce_pivots(&self, c: &mut [T]) -> std::result::Result<Sparse<T>, Overflow> {
        let mut mult = Vec::new();
        for (j, (row, p)) in self.pivots.iter().enumerate() {
            if c[*row].is_nil() {
                continue;
            }
            let e = entry_at(&p.entries, *row).expect("pivot entry");
            let q = T::lin(&c[*row], e, &T::nil(), &T::nil()).ok_or(Overflow)?;
            for (i, v) in &p.entries {
                c[*i] = c[*i].sub_mul(&q, v).ok_or(Overflow)?;
            }
            mult.push((j, q));
        }
        Ok(mult)
    }

    fn dense(target: &[BigInt]) -> std::result::Result<Vec<T>, Overflow> {
        target.iter().map(T::from_big).collect::<Option<Vec<_>>>().ok_or(Overflow)
    }

    fn contains(&self, target: &[BigInt]) -> std::result::Result<bool, Overflow> {
        let mut c = Self::dense(target)?;
        self.reduce_pivots(&mut c)?;
        Ok(self.echelon.reduce(c)?.is_some())
    }

    fn solve(&self, target: &[BigInt]) -> std::result::Result<Option<Vec<(usize, BigInt)>>, Overflow> {
        let mut c = Self::dense(target)?;
        let unit = self.reduce_pivots(&mut c)?;
        let Some(mult) = self.echelon.reduce(c)? else {
            return Ok(None);
        };
        let add = |acc: &mut T, q: &T, x: &T| -> std::result::Result<(), Overflow> {
            *acc = T::lin(&T::unit(), acc, q, x).ok_or(Overflow)?;
            Ok(())
        };
        let minus_one = T::nil().sub_mul(&T::unit(), &T::unit()).ok_or(Overflow)?;
        let mut on_pivot = vec![T::nil(); self.pivots.len()];
        let mut on_gen: BTreeMap<usize, T> = BTreeMap::new();
        for (j, q) in &unit {
            add(&mut on_pivot[*j], &T::unit(), q)?;
        }
        for (m, c) in self.echelon.certificate(&mult)? {
            let r = &self.residual[m];
            add(on_gen.entry(r.base).or_insert_with(T::nil), &T::unit(), &c)?;
            let neg_c = T::lin(&minus_one, &c, &T::nil(), &T::nil()).ok_or(Overflow)?;
            for (j, q) in &r.steps {
                add(&mut on_pivot[*j], &neg_c, q)?;
            }
        }
        for j in (0..self.pivots.len()).rev() {
            let w = std::mem::replace(&mut on_pivot[j], T::nil());
            if w.is_nil() {
                continue;
            }
            let p = &self.pivots[j].1;
            add(on_gen.entry(p.base).or_insert_with(T::nil), &T::unit(), &w)?;
            let neg_w = T::lin(&minus_one, &w, &T::nil(), &T::nil()).ok_or(Overflow)?;
            for (i, q) in &p.steps {
                add(&mut on_pivot[*i], &neg_w, q)?;
            }
        }
        Ok(Some(on_gen.into_iter().filter(|(_, v)| !v.is_nil()).map(|(g, v)| (g, v.to_big())).collect()))
    }

    fn coordinates(&self, v: &[BigInt]) -> std::result::Result<Option<Vec<BigInt>>, Overflow> {
        let mut c = Self::dense(v)?;
        let unit = self.reduce_pivots(&mut c)?;
        let Some(mult) = self.echelon.reduce(c)? else {
            return Ok(None);
        };
        let mut coords = vec![BigInt::zero(); self.rank()];
        for (j, q) in unit {
            coords[j] = q.to_big();
        }
        let order = self.echelon.pivot_order();
        for (k, q) in mult {
            let pos = order.iter().position(|&x| x == k).expect("basis vector in order");
            coords[self.pivots.len() + pos] = q.to_big();
        }
        Ok(Some(coords))
    }

    fn rank(&self) -> usize {
        self.pivots.len() + self.echelon.vecs.len()
    }

    fn basis(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self
            .pivots
            .iter()
            .map(|(_, p)| {
                let mut v = vec![BigInt::zero(); self.dim];
                for (i, x) in &p.entries {
                    v[*i] = x.to_big();
                }
                v
            })
            .collect();
        for k in self.echelon.pivot_order() {
            out.push(self.echelon.vecs[k].entries.iter().map(Scalar::to_big).collect());
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Small(Presolved<i64>),
    Big(Presolved<BigInt>),
}

/// A finitely generated sublattice of `Z^dim`, prepared for repeated
/// membership queries.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    dim: usize,
    generators: Vec<Vec<(usize, BigInt)>>,
    repr: Repr,
    /// Built on first use when an `i64` query overflows.
    big: OnceLock<Presolved<BigInt>>,
}

impl LatticeBasis {
    /// Generators given as sparse `(row, value)` lists.
    pub fn from_sparse_columns(dim: usize, generators: Vec<Vec<(usize, BigInt)>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(generators.len());
        for g in generators {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (i, v) in g {
                if i >= dim {
                    return invalid(format!("generator row {i} outside dimension {dim}"));
                }
                *acc.entry(i).or_insert_with(BigInt::zero) += v;
            }
            cleaned.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect::<Vec<_>>());
        }
        let repr = Presolved::build(dim, &cleaned).map(Repr::Small).unwrap_or_else(|_| {
            Repr::Big(Presolved::build(dim, &cleaned).expect("BigInt arithmetic does not overflow"))
        });
        Ok(Self { dim, generators: cleaned, repr, big: OnceLock::new() })
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m.get(i, j).is_zero())
                    .map(|i| (i, m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        Self::from_sparse_columns(m.rows(), cols).expect("rows in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, k: usize) -> &[(usize, BigInt)] {
        &self.generators[k]
    }

    pub fn rank(&self) -> usize {
        match &self.repr {
            Repr::Small(p) => p.rank(),
            Repr::Big(p) => p.rank(),
        }
    }

    /// A basis of the lattice: unit-pivot vectors first, then the echelon
    /// vectors ordered by pivot row.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        match &self.repr {
            Repr::Small(p) => p.basis(),
            Repr::Big(p) => p.basis(),
        }
    }

    fn check_len(&self, target: &[BigInt]) -> Result<()> {
        if target.len() != self.dim {
            return invalid(format!("target of length {} for lattice in Z^{}", target.len(), self.dim));
        }
        Ok(())
    }

    fn with_big<R>(&self, f: impl FnOnce(&Presolved<BigInt>) -> std::result::Result<R, Overflow>) -> R {
        let big = self.big.get_or_init(|| {
            Presolved::build(self.dim, &self.generators).expect("BigInt arithmetic does not overflow")
        });
        f(big).expect("BigInt arithmetic does not overflow")
    }

    fn run<R>(
        &self,
        small: impl FnOnce(&Presolved<i64>) -> std::result::Result<R, Overflow>,
        big: impl Fn(&Presolved<BigInt>) -> std::result::Result<R, Overflow>,
    ) -> R {
        match &self.repr {
            Repr::Small(p) => small(p).unwrap_or_else(|Overflow| self.with_big(big)),
            Repr::Big(p) => big(p).expect("BigInt arithmetic does not overflow"),
        }
    }

    pub fn contains(&self, target: &[BigInt]) -> Result<bool> {
        self.check_len(target)?;
        Ok(self.run(|p| p.contains(target), |p| p.contains(target)))
    }

    /// Sparse integer combination `(generator index, coefficient)` of the
    /// generators equal to `target`, or `None` when no integer solution
    /// exists.
    pub fn solve(&self, target: &[BigInt]) -> Result<Option<Vec<(usize, BigInt)>>> {
        self.check_len(target)?;
        let cert = self.run(|p| p.solve(target), |p| p.solve(target));
        if let Some(c) = &cert {
            assert_eq!(self.combination(c), target, "lattice certificate failed re-verification");
        }
        Ok(cert)
    }

    /// Coordinates of `v` in the basis returned by [`Self::basis`].
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_len(v)?;
        let coords = match &self.repr {
            // both builds make the same pivot choices, so the bases agree
            Repr::Small(p) => p.coordinates(v).unwrap_or_else(|Overflow| self.with_big(|b| b.coordinates(v))),
            Repr::Big(p) => p.coordinates(v).expect("BigInt arithmetic does not overflow"),
        };
        Ok(coords)
    }

    /// `sum coeff * generator` as a dense vector.
    pub fn combination(&self, coeffs: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim];
        for (k, c) in coeffs {
            for (i, v) in &self.generators[*k] {
                out[*i] += c * v;
            }
        }
        out
    }
}

/// Integer solution `x` of `m * x = target` (columns of `m` are the
/// generators), or `None` if none exists.
pub fn solve_integer_linear(m: &IntMatrix, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if target.len() != m.rows() {
        return invalid(format!(
            "target of length {} for a matrix with {} rows",
            target.len(),
            m.rows()
        ));
    }
    let lattice = LatticeBasis::from_matrix(m);
    Ok(lattice.solve(target)?.map(|sparse| {
        let mut x = vec![BigInt::zero(); m.cols()];
        for (k, v) in sparse {
            x[k] = v;
        }
        x
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        let m = IntMatrix::from_rows(&[[2]]).unwrap();
        assert_eq!(solve_integer_linear(&m, &ints(&[4])).unwrap(), Some(ints(&[2])));
        assert_eq!(solve_integer_linear(&m, &ints(&[3])).unwrap(), None);
        let m = IntMatrix::from_rows(&[[1, 0], [1, 2]]).unwrap();
        assert_eq!(solve_integer_linear(&m, &ints(&[1, 3])).unwrap(), Some(ints(&[1, 1])));
    }

    #[test]
    fn dimension_mismatch() {
        let m = IntMatrix::from_rows(&[[1, 0], [1, 2]]).unwrap();
        assert!(solve_integer_linear(&m, &ints(&[1])).is_err());
        assert!(LatticeBasis::from_sparse_columns(2, vec![vec![(2, BigInt::one())]]).is_err());
    }

    #[test]
    fn gcd_merges_pivots() {
        // columns 6 and 10 generate 2Z
        let m = IntMatrix::from_rows(&[[6, 10]]).unwrap();
        let x = solve_integer_linear(&m, &ints(&[2])).unwrap().unwrap();
        assert_eq!(&x[0] * 6 + &x[1] * 10, BigInt::from(2));
        assert_eq!(solve_integer_linear(&m, &ints(&[3])).unwrap(), None);
    }

    #[test]
    fn big_fallback() {
        let huge: BigInt = BigInt::from(i64::MAX) * 4 + 1;
        let l = LatticeBasis::from_sparse_columns(
            2,
            vec![vec![(0, huge.clone()), (1, BigInt::one())], vec![(1, BigInt::from(3))]],
        )
        .unwrap();
        let t = vec![&huge * 2, BigInt::from(11)];
        let cert = l.solve(&t).unwrap().unwrap();
        assert_eq!(l.combination(&cert), t);
        assert!(!l.contains(&[huge.clone(), BigInt::from(2)]).unwrap());
    }

    #[test]
    fn coordinates_in_echelon_basis() {
        let m = IntMatrix::from_rows(&[[2, 0, 2], [0, 3, 3]]).unwrap();
        let l = LatticeBasis::from_matrix(&m);
        assert_eq!(l.rank(), 2);
        let basis = l.basis();
        let v = ints(&[4, 9]);
        let c = l.coordinates(&v).unwrap().unwrap();
        let mut back = vec![BigInt::zero(); 2];
        for (b, k) in basis.iter().zip(&c) {
            for i in 0..2 {
                back[i] += &b[i] * k;
            }
        }
        assert_eq!(back, v);
        assert_eq!(l.coordinates(&ints(&[1, 0])).unwrap(), None);
    }

    // Brute-force oracle: enumerate small coefficient boxes.
    fn brute_member(m: &IntMatrix, t: &[BigInt], bound: i64) -> bool {
        let n = m.cols();
        let mut x = vec![-bound; n];
        loop {
            let xv: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if m.mul_vec(&xv).unwrap() == t {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                x[k] += 1;
                if x[k] <= bound {
                    break;
                }
                x[k] = -bound;
                k += 1;
            }
        }
    }

    #[test]
    fn fuzz_solutions_always_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..6);
            let data: Vec<BigInt> = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-6..7))).collect();
            let m = IntMatrix::new(rows, cols, data).unwrap();
            let t: Vec<BigInt> = if rng.gen_bool(0.5) {
                let x: Vec<BigInt> = (0..cols).map(|_| BigInt::from(rng.gen_range(-4..5))).collect();
                m.mul_vec(&x).unwrap()
            } else {
                (0..rows).map(|_| BigInt::from(rng.gen_range(-9..10))).collect()
            };
            match solve_integer_linear(&m, &t).unwrap() {
                Some(x) => assert_eq!(m.mul_vec(&x).unwrap(), t),
                None => assert!(cols > 3 || !brute_member(&m, &t, 12), "{m:?} {t:?}"),
            }
        }
    }

    #[test]
    fn sparse_unit_columns_with_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let dim = rng.gen_range(4..30);
            let gens: Vec<Vec<(usize, BigInt)>> = (0..rng.gen_range(1..40))
                .map(|_| {
                    (0..3)
                        .map(|_| (rng.gen_range(0..dim), BigInt::from([1, -1, 2, -3][rng.gen_range(0..4)])))
                        .collect()
                })
                .collect();
            let l = LatticeBasis::from_sparse_columns(dim, gens).unwrap();
            let basis = l.basis();
            assert_eq!(basis.len(), l.rank());
            let mut t = vec![BigInt::zero(); dim];
            for k in 0..l.num_generators() {
                let c = BigInt::from(rng.gen_range(-3..4));
                for (i, v) in l.generator(k) {
                    t[*i] += &c * v;
                }
            }
            let cert = l.solve(&t).unwrap().unwrap();
            assert_eq!(l.combination(&cert), t);
            let coords = l.coordinates(&t).unwrap().unwrap();
            let mut back = vec![BigInt::zero(); dim];
            for (b, k) in basis.iter().zip(&coords) {
                for i in 0..dim {
                    back[i] += &b[i] * k;
                }
            }
            assert_eq!(back, t);
            let mut off = t.clone();
            off[rng.gen_range(0..dim)] += 1;
            if let Some(c) = l.solve(&off).unwrap() {
                assert_eq!(l.combination(&c), off);
            }
        }
    }
}
