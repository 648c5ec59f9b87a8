use std::collections::{HashMap, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::exactnum::{add_mod, factor, inv_mod, mul_mod, sqrt_mod, sub_mod, BigInt};
use num_traits::ToPrimitive;

/// A point of `E(F_p)`; `Infinity` is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointModP {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl PointModP {
    pub fn affine(x: u64, y: u64) -> Self {
        PointModP::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointModP::Infinity)
    }
}

impl fmt::Display for PointModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointModP::Infinity => write!(f, "O"),
            PointModP::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// The finite group `E(F_p)` of a curve with good reduction at an odd prime,
/// with all points enumerated and a basis for its invariant-factor
/// decomposition.
#[derive(Debug, Clone)]
pub struct CurveGroupModP {
    p: u64,
    a: [u64; 5],
    points: Vec<PointModP>,
    index: HashMap<PointModP, usize>,
    moduli: Vec<u64>,
    generators: Vec<PointModP>,
    coords: Vec<Vec<u64>>,
}

impl CurveGroupModP {
    /// `a` are the reduced coefficients `[a1, a2, a3, a4, a6]` of a
    /// nonsingular curve over `F_p`, `p` odd.
    pub(crate) fn new(a: [u64; 5], p: u64) -> Self {
        let mut g = CurveGroupModP {
            p,
            a,
            points: Vec::new(),
            index: HashMap::new(),
            moduli: Vec::new(),
            generators: Vec::new(),
            coords: Vec::new(),
        };
        g.enumerate();
        g.decompose();
        g
    }

    fn enumerate(&mut self) {
        let p = self.p;
        let [a1, a2, a3, a4, a6] = self.a;
        let inv2 = inv_mod(2, p).expect("p odd");
        let mut pts = vec![PointModP::Infinity];
        for x in 0..p {
            let b = add_mod(mul_mod(a1, x, p), a3, p);
            let x2 = mul_mod(x, x, p);
            let c = [mul_mod(x2, x, p), mul_mod(a2, x2, p), mul_mod(a4, x, p), a6]
                .iter()
                .fold(0, |acc, &v| add_mod(acc, v, p));
            let d = add_mod(mul_mod(b, b, p), mul_mod(4, c, p), p);
            let Some(s) = sqrt_mod(d, p) else { continue };
            let y1 = mul_mod(sub_mod(s, b, p), inv2, p);
            pts.push(PointModP::affine(x, y1));
            if s != 0 {
                let y2 = mul_mod(sub_mod(p - s, b, p), inv2, p);
                pts.push(PointModP::affine(x, y2));
            }
        }
        pts.sort();
        self.index = pts.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        self.points = pts;
    }

    fn decompose(&mut self) {
        let n = self.points.len() as u64;
        let primes: Vec<u64> =
            factor(&BigInt::from(n)).into_iter().map(|(q, _)| q.to_u64().expect("small")).collect();
        let order_of = |g: &Self, q: &PointModP| {
            let mut ord = n;
            for &l in &primes {
                while ord % l == 0 && g.mul(ord / l, q).is_infinity() {
                    ord /= l;
                }
            }
            ord
        };
        let mut best = (1u64, PointModP::Infinity);
        for q in &self.points {
            let o = order_of(self, q);
            if o > best.0 {
                best = (o, *q);
            }
            if o == n {
                break;
            }
        }
        let (n2, pgen) = best;
        let n1 = n / n2;
        let mut multiples = Vec::with_capacity(n2 as usize);
        let mut acc = PointModP::Infinity;
        for _ in 0..n2 {
            multiples.push(acc);
            acc = self.add(&acc, &pgen);
        }
        let mut qgen = PointModP::Infinity;
        if n1 > 1 {
            let cyclic: HashSet<PointModP> = multiples.iter().copied().collect();
            qgen = *self
                .points
                .iter()
                .find(|q| {
                    if !self.mul(n1, q).is_infinity() {
                        return false;
                    }
                    let mut r = **q;
                    for _ in 1..n1 {
                        if cyclic.contains(&r) {
                            return false;
                        }
                        r = self.add(&r, q);
                    }
                    true
                })
                .expect("a maximal cyclic subgroup has a complement");
        }
        let mut coords = vec![Vec::new(); self.points.len()];
        let mut row = PointModP::Infinity;
        for j in 0..n1 {
            for (i, m) in multiples.iter().enumerate() {
                let pt = self.add(m, &row);
                let c = match (n1 > 1, n2 > 1) {
                    (true, _) => vec![j, i as u64],
                    (false, true) => vec![i as u64],
                    (false, false) => vec![],
                };
                coords[self.index[&pt]] = c;
            }
            row = self.add(&row, &qgen);
        }
        self.coords = coords;
        self.moduli = [n1, n2].into_iter().filter(|&m| m > 1).collect();
        self.generators = match (n1 > 1, n2 > 1) {
            (true, _) => vec![qgen, pgen],
            (false, true) => vec![pgen],
            _ => vec![],
        };
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> [u64; 5] {
        self.a
    }

    pub fn points(&self) -> &[PointModP] {
        &self.points
    }

    pub fn order(&self) -> u64 {
        self.points.len() as u64
    }

    /// Invariant factors `n1 | n2` of the group (trivial factors omitted).
    pub fn structure(&self) -> &[u64] {
        &self.moduli
    }

    /// Generators matching [`Self::structure`].
    pub fn generators(&self) -> &[PointModP] {
        &self.generators
    }

    pub fn index_of(&self, q: &PointModP) -> Option<usize> {
        self.index.get(q).copied()
    }

    /// Coordinates of `q` with respect to [`Self::generators`].
    pub fn discrete_log(&self, q: &PointModP) -> Option<&[u64]> {
        self.index_of(q).map(|i| self.coords[i].as_slice())
    }

    /// `sum c_i g_i`.
    pub fn from_coordinates(&self, c: &[u64]) -> PointModP {
        c.iter()
            .zip(&self.generators)
            .fold(PointModP::Infinity, |acc, (k, g)| self.add(&acc, &self.mul(*k, g)))
    }

    pub fn contains(&self, q: &PointModP) -> bool {
        match *q {
            PointModP::Infinity => true,
            PointModP::Affine { x, y } => {
                let p = self.p;
                if x >= p || y >= p {
                    return false;
                }
                let [a1, a2, a3, a4, a6] = self.a;
                let lhs = add_mod(mul_mod(y, y, p), add_mod(mul_mod(mul_mod(a1, x, p), y, p), mul_mod(a3, y, p), p), p);
                let x2 = mul_mod(x, x, p);
                let rhs = [mul_mod(x2, x, p), mul_mod(a2, x2, p), mul_mod(a4, x, p), a6]
                    .iter()
                    .fold(0, |acc, &v| add_mod(acc, v, p));
                lhs == rhs
            }
        }
    }

    pub fn negate(&self, q: &PointModP) -> PointModP {
        match *q {
            PointModP::Infinity => PointModP::Infinity,
            PointModP::Affine { x, y } => {
                let p = self.p;
                let [a1, _, a3, _, _] = self.a;
                let s = add_mod(add_mod(y, mul_mod(a1, x, p), p), a3, p);
                PointModP::affine(x, (p - s) % p)
            }
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, q: &PointModP, r: &PointModP) -> PointModP {
        let (x1, y1, x2, y2) = match (*q, *r) {
            (PointModP::Infinity, _) => return *r,
            (_, PointModP::Infinity) => return *q,
            (PointModP::Affine { x: x1, y: y1 }, PointModP::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let p = self.p;
        let [a1, a2, a3, a4, a6] = self.a;
        let (lambda, nu) = if x1 == x2 {
            if add_mod(add_mod(add_mod(y1, y2, p), mul_mod(a1, x1, p), p), a3, p) == 0 {
                return PointModP::Infinity;
            }
            let den = add_mod(add_mod(mul_mod(2, y1, p), mul_mod(a1, x1, p), p), a3, p);
            let inv = inv_mod(den, p).expect("nonzero mod p");
            let x1sq = mul_mod(x1, x1, p);
            let num_l = sub_mod(
                add_mod(add_mod(mul_mod(3, x1sq, p), mul_mod(mul_mod(2, a2, p), x1, p), p), a4, p),
                mul_mod(a1, y1, p),
                p,
            );
            let num_n = sub_mod(
                add_mod(add_mod(p - mul_mod(x1sq, x1, p) % p, mul_mod(a4, x1, p), p), mul_mod(2, a6, p), p),
                mul_mod(a3, y1, p),
                p,
            );
            (mul_mod(num_l, inv, p), mul_mod(num_n, inv, p))
        } else {
            let inv = inv_mod(sub_mod(x2, x1, p), p).expect("distinct x");
            let lambda = mul_mod(sub_mod(y2, y1, p), inv, p);
            let nu = mul_mod(sub_mod(mul_mod(y1, x2, p), mul_mod(y2, x1, p), p), inv, p);
            (lambda, nu)
        };
        let x3 = sub_mod(
            sub_mod(sub_mod(add_mod(mul_mod(lambda, lambda, p), mul_mod(a1, lambda, p), p), a2, p), x1, p),
            x2,
            p,
        );
        let t = mul_mod(add_mod(lambda, a1, p), x3, p);
        let y3 = sub_mod(sub_mod(sub_mod(0, t, p), nu, p), a3, p);
        PointModP::affine(x3, y3)
    }

    pub fn sub(&self, q: &PointModP, r: &PointModP) -> PointModP {
        self.add(q, &self.negate(r))
    }

    /// `k * q` by double-and-add.
    pub fn mul(&self, mut k: u64, q: &PointModP) -> PointModP {
        let mut acc = PointModP::Infinity;
        let mut base = *q;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Order of `q` in the group.
    pub fn point_order(&self, q: &PointModP) -> u64 {
        let c = self.discrete_log(q).expect("point on the curve");
        c.iter().zip(&self.moduli).fold(1u64, |acc, (ci, m)| acc.lcm(&(m / ci.gcd(m))))
    }

    /// Points `q` with `2q = O`, `q != O`.
    pub fn two_torsion(&self) -> Vec<PointModP> {
        self.points.iter().filter(|q| !q.is_infinity() && self.add(q, q).is_infinity()).copied().collect()
    }
}
