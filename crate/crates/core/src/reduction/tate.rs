//! Tate's algorithm at a single prime, over the rationals.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::KodairaType;
use crate::elliptic::{ModelTransform, WeierstrassModel};
use crate::exactnum::{inv_mod, rat_int, rat_valuation, residue, BigInt, BigRat};

#[derive(Debug, Clone)]
pub(crate) struct TateOutcome {
    pub kodaira: KodairaType,
    pub disc_valuation: u32,
    pub conductor_exponent: u32,
    /// p-minimal, p-integral model reached by the algorithm.
    pub model: WeierstrassModel,
    /// Transform from the input model to `model`.
    pub transform: ModelTransform,
    /// For multiplicative reduction: the tangent cone at the node splits.
    pub tangent_cone_split: Option<bool>,
}

struct Local {
    p: u64,
    pi: BigRat,
}

impl Local {
    fn val(&self, x: &BigRat) -> i64 {
        rat_valuation(x, self.p).unwrap_or(i64::MAX)
    }

    fn divides(&self, x: &BigRat) -> bool {
        self.val(x) > 0
    }

    fn res(&self, x: &BigRat) -> u64 {
        residue(x, self.p).expect("p-integral")
    }

    fn reduce(&self, x: &BigRat) -> BigRat {
        rat_int(self.res(x))
    }

    fn inv(&self, x: &BigRat) -> BigRat {
        rat_int(inv_mod(self.res(x), self.p).expect("unit"))
    }

    // p-th roots are the identity on F_p, so the square root in F_2 and the
    // cube root in F_3 are plain reduction.
    fn root(&self, x: &BigRat) -> BigRat {
        debug_assert!(self.p == 2 || self.p == 3);
        self.reduce(x)
    }

    fn pow(&self, e: u32) -> BigRat {
        let mut acc = BigRat::one();
        for _ in 0..e {
            acc *= &self.pi;
        }
        acc
    }

    // Does X^2 + b X + c have a root in F_p?
    fn quadratic_has_root(&self, b: &BigRat, c: &BigRat) -> bool {
        let p = self.p;
        let (b, c) = (self.res(b), self.res(c));
        (0..p).any(|x| (x * x % p + b * x % p + c) % p == 0)
    }
}

struct State {
    model: WeierstrassModel,
    transform: ModelTransform,
}

impl State {
    fn apply(&mut self, w: ModelTransform) {
        self.model = self.model.transform(&w);
        self.transform = self.transform.then(&w);
    }

    fn rst(&mut self, r: BigRat, s: BigRat, t: BigRat) {
        self.apply(ModelTransform { u: BigRat::one(), r, s, t });
    }

    fn a(&self) -> [BigRat; 5] {
        self.model.coefficients().clone()
    }
}

pub(crate) fn tate(input: &WeierstrassModel, p: u64) -> TateOutcome {
    let loc = Local { p, pi: rat_int(p) };
    let zero = BigRat::zero;
    let mut st = State { model: input.clone(), transform: ModelTransform::identity() };

    // Make the model p-integral.
    let weights = [1i64, 2, 3, 4, 6];
    let e = st
        .a()
        .iter()
        .zip(weights)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, w)| Integer::div_floor(&loc.val(c), &w))
        .min()
        .unwrap_or(0);
    if e < 0 {
        st.apply(ModelTransform { u: crate::exactnum::rat_pow(&loc.pi, e), r: zero(), s: zero(), t: zero() });
    }

    let half = if p == 2 { BigRat::zero() } else { loc.inv(&rat_int(2)) };

    loop {
        let vd = loc.val(&st.model.discriminant()) as u32;
        let finish = |st: State, kodaira: KodairaType, fp: u32, split: Option<bool>| TateOutcome {
            kodaira,
            disc_valuation: vd,
            conductor_exponent: fp,
            model: st.model,
            transform: st.transform,
            tangent_cone_split: split,
        };
        if vd == 0 {
            return finish(st, KodairaType::I0, 0, None);
        }

        // Move the singular point of the reduction to (0, 0).
        let m = &st.model;
        let [a1, a2, a3, a4, a6] = st.a();
        let (b2, b4, b6) = (m.b2(), m.b4(), m.b6());
        let (c4, c6) = (m.c4(), m.c6());
        let (r, t) = match p {
            2 => {
                if loc.divides(&b2) {
                    let r = loc.root(&a4);
                    let t = loc.root(&(((&r + &a2) * &r + &a4) * &r + &a6));
                    (r, t)
                } else {
                    let inv = loc.inv(&a1);
                    let r = &inv * &a3;
                    let t = &inv * (&a4 + &r * &r);
                    (r, t)
                }
            }
            3 => {
                let r = if loc.divides(&b2) { loc.root(&-&b6) } else { -loc.inv(&b2) * &b4 };
                let t = &a1 * &r + &a3;
                (r, t)
            }
            _ => {
                let r = if loc.divides(&c4) {
                    -loc.inv(&rat_int(12)) * &b2
                } else {
                    -loc.inv(&(rat_int(12) * &c4)) * (&c6 + &b2 * &c4)
                };
                let t = -&half * (&a1 * &r + &a3);
                (r, t)
            }
        };
        let (r, t) = (loc.reduce(&r), loc.reduce(&t));
        st.rst(r, zero(), t);
        let [a1, a2, _, _, a6] = st.a();

        if !loc.divides(&st.model.c4()) {
            // Tangent cone y^2 + a1 xy - a2 x^2 at the node.
            let split = loc.quadratic_has_root(&a1, &-&a2);
            return finish(st, KodairaType::In(vd), 1, Some(split));
        }
        if loc.val(&a6) < 2 {
            return finish(st, KodairaType::II, vd, None);
        }
        if loc.val(&st.model.b8()) < 3 {
            return finish(st, KodairaType::III, vd - 1, None);
        }
        if loc.val(&st.model.b6()) < 3 {
            return finish(st, KodairaType::IV, vd - 2, None);
        }

        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        let [a1, a2, a3, _, a6] = st.a();
        let (s, t) = match p {
            2 => (loc.root(&a2), &loc.pi * loc.root(&(&a6 / loc.pow(2)))),
            3 => (a1.clone(), a3.clone()),
            _ => (-&a1 * &half, -&a3 * &half),
        };
        st.rst(zero(), s, t);

        let [_, a2, _, a4, a6] = st.a();
        let b = &a2 / &loc.pi;
        let c = &a4 / loc.pow(2);
        let d = &a6 / loc.pow(3);
        let (bb, cc, bc) = (&b * &b, &c * &c, &b * &c);
        let w = rat_int(27) * &d * &d - &bb * &cc + rat_int(4) * &b * &bb * &d - rat_int(18) * &bc * &d
            + rat_int(4) * &c * &cc;
        let x = rat_int(3) * &c - &bb;
        // Largest root multiplicity of T^3 + b T^2 + c T + d mod p.
        let multiplicity = if !loc.divides(&w) {
            1
        } else if loc.divides(&x) {
            3
        } else {
            2
        };

        if multiplicity == 1 {
            return finish(st, KodairaType::I0Star, vd - 4, None);
        }

        if multiplicity == 2 {
            // Double root of the cubic moved to T = 0.
            let r = match p {
                2 => loc.root(&c),
                3 => &c * loc.inv(&b),
                _ => (&bc - rat_int(9) * &d) * loc.inv(&(rat_int(2) * &x)),
            };
            st.rst(&loc.pi * loc.reduce(&r), zero(), zero());
            let (mut ix, mut iy) = (3u32, 3u32);
            let mut mx = loc.pow(2);
            let mut my = loc.pow(2);
            loop {
                let [_, a2, a3, _, a6] = st.a();
                let a2t = &a2 / &loc.pi;
                let a3t = &a3 / &my;
                let a6t = &a6 / (&mx * &my);
                if !loc.divides(&(&a3t * &a3t + rat_int(4) * &a6t)) {
                    break;
                }
                let t = if p == 2 { &my * loc.root(&a6t) } else { &my * loc.reduce(&(-&a3t * &half)) };
                st.rst(zero(), zero(), t);
                my = &my * &loc.pi;
                iy += 1;
                let [_, _, _, a4, a6] = st.a();
                let a4t = &a4 / (&loc.pi * &mx);
                let a6t = &a6 / (&mx * &my);
                if !loc.divides(&(&a4t * &a4t - rat_int(4) * &a6t * &a2t)) {
                    break;
                }
                let r = if p == 2 {
                    &mx * loc.root(&(&a6t * loc.inv(&a2t)))
                } else {
                    &mx * loc.reduce(&(-&a4t * loc.inv(&(rat_int(2) * &a2t))))
                };
                st.rst(r, zero(), zero());
                mx = &mx * &loc.pi;
                ix += 1;
            }
            let n = ix + iy - 5;
            return finish(st, KodairaType::InStar(n), vd - n - 4, None);
        }

        // Triple root of the cubic moved to T = 0.
        let r = match p {
            2 => b.clone(),
            3 => loc.root(&-&d),
            _ => -&b * loc.inv(&rat_int(3)),
        };
        st.rst(&loc.pi * loc.reduce(&r), zero(), zero());
        let [_, _, a3, _, a6] = st.a();
        let a3t = &a3 / loc.pow(2);
        let a6t = &a6 / loc.pow(4);
        if !loc.divides(&(&a3t * &a3t + rat_int(4) * &a6t)) {
            return finish(st, KodairaType::IVStar, vd - 6, None);
        }
        let t = if p == 2 {
            -loc.pow(2) * loc.root(&a6t)
        } else {
            loc.pow(2) * loc.reduce(&(-&a3t * &half))
        };
        st.rst(zero(), zero(), t);
        let [_, _, _, a4, a6] = st.a();
        if loc.val(&a4) < 4 {
            return finish(st, KodairaType::IIIStar, vd - 7, None);
        }
        if loc.val(&a6) < 6 {
            return finish(st, KodairaType::IIStar, vd - 8, None);
        }
        // Not minimal: divide out by u = p.
        st.apply(ModelTransform { u: loc.pi.clone(), r: zero(), s: zero(), t: zero() });
    }
}

/// The part of `q` that is not `p`-integral: the unique `f` in
/// `Z[1/p] cap [0, 1)` with `q - f` integral at `p`.
pub(crate) fn polar_part(q: &BigRat, p: u64) -> BigRat {
    let pb = BigInt::from(p);
    let mut den = q.denom().clone();
    let mut pk = BigInt::one();
    while (&den % &pb).is_zero() {
        den /= &pb;
        pk *= &pb;
    }
    if pk.is_one() {
        return BigRat::zero();
    }
    let e = den.extended_gcd(&pk);
    let inv = e.x.mod_floor(&pk);
    let num = (q.numer() * inv).mod_floor(&pk);
    BigRat::new(num, pk)
}
