//! Acceptance suite. Each criterion runs against independent oracles
//! coded here and prints one PASS/FAIL line with its runtime budget.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use isogeny_forge::checkers::{global2_prime_filter, supersingular_scan};
use isogeny_forge::elliptic::{curve_from_pair, rational_points_mod_p, ModelTransform, PointModP, TwoTorsionCurve, WeierstrassModel};
use isogeny_forge::exactnum::{factor, is_prime, primes_up_to, rat_valuation, valuation, BigInt, BigRat};
use isogeny_forge::kgroup::{
    bilinear_relations_generating, product_decompose, prove_member, prove_skew, RelationLattice, SlotGroup,
    SymbolSum, SymbolUniverse, ThirdPoint,
};
use isogeny_forge::pontryagin::{aug_filtration, gr_generators, product_generators, same_lattice, FinAbGroup};
use isogeny_forge::reduction::{classify_reduction, conductor, local_conductor_exponents, minimal_model_at};
use isogeny_forge::scholten::{build_scholten_i64, torsion_forms_orbit, verify_split_jacobian, verify_split_jacobian_against};
use isogeny_forge_cli::strip_timing;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------- shared oracles ----------

fn md(v: i64, p: i64) -> i64 {
    v.rem_euclid(p)
}

/// `(p + 1 - #E(F_p))` for `y^2 = x(x-a)(x-b)` by counting all pairs.
fn ap_pair_brute(a: i64, b: i64, p: i64) -> i64 {
    let mut n = 1;
    for x in 0..p {
        let rhs = md(x * md(x - a, p) % p * md(x - b, p), p);
        n += (0..p).filter(|y| y * y % p == rhs).count() as i64;
    }
    p + 1 - n
}

fn poly_mul(f: &[i64], g: &[i64]) -> Vec<i64> {
    let mut h = vec![0; f.len() + g.len() - 1];
    for (i, x) in f.iter().enumerate() {
        for (j, y) in g.iter().enumerate() {
            h[i + j] += x * y;
        }
    }
    h
}

/// `lambda` and `S` for the genus-2 curve, from the defining product.
fn scholten_oracle(a: i64, b: i64, c: i64, d: i64) -> (i64, Vec<i64>) {
    let s = poly_mul(&poly_mul(&[-(c - d), 0, a - b], &[-c, 0, a]), &[-d, 0, b]);
    (a * d - b * c, s)
}

fn trim(mut f: Vec<i64>) -> Vec<i64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn pinv(a: i64, p: i64) -> i64 {
    let (mut r, mut b, mut e) = (1, md(a, p), p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(f: &[i64], g: &[i64], p: i64) -> Vec<i64> {
    let mut f = trim(f.iter().map(|&x| md(x, p)).collect());
    let g = trim(g.iter().map(|&x| md(x, p)).collect());
    let lead = pinv(*g.last().unwrap(), p);
    while f.len() >= g.len() {
        let k = f.last().unwrap() * lead % p;
        let shift = f.len() - g.len();
        for (i, &gi) in g.iter().enumerate() {
            f[shift + i] = md(f[shift + i] - k * gi, p);
        }
        f = trim(f);
    }
    f
}

/// `f` mod `p` has no repeated factor over the algebraic closure.
fn squarefree_mod(f: &[i64], p: i64) -> bool {
    let deriv: Vec<i64> = f.iter().enumerate().skip(1).map(|(i, &c)| md(i as i64 * c, p)).collect();
    let (mut x, mut y) = (trim(f.iter().map(|&c| md(c, p)).collect()), trim(deriv));
    if y.is_empty() {
        return false;
    }
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() == 1
}

/// `#C(F_p)` for `lambda y^2 = S(x)`, affine points plus the points at
/// infinity of the smooth model.
fn count_c_brute(lambda: i64, s: &[i64], p: i64) -> i64 {
    let lam = md(lambda, p);
    let mut n = 0;
    for x in 0..p {
        let v = s.iter().rev().fold(0, |acc, &k| md(acc * x + k, p));
        n += (0..p).filter(|y| lam * y % p * y % p == v).count() as i64;
    }
    let lead = md(s[6], p);
    n + (0..p).filter(|y| lam * y % p * y % p == lead).count() as i64
}

fn oracle_good_primes(a: i64, b: i64, c: i64, d: i64, bound: i64) -> Vec<i64> {
    let (lambda, s) = scholten_oracle(a, b, c, d);
    (3..=bound)
        .filter(|&p| is_prime(p as u64))
        .filter(|&p| {
            lambda % p != 0
                && s[6] % p != 0
                && squarefree_mod(&s, p)
                && (a * b * (a - b)) % p != 0
                && (c * d * (c - d)) % p != 0
        })
        .collect()
}

/// Minimal short-Weierstrass group law over `F_q`, for structure oracles.
struct Short {
    a4: i64,
    a6: i64,
    q: i64,
}

type Pt = Option<(i64, i64)>;

impl Short {
    fn points(&self) -> Vec<Pt> {
        let q = self.q;
        let mut v = vec![None];
        for x in 0..q {
            for y in 0..q {
                if md(y * y - x * x % q * x - self.a4 * x - self.a6, q) == 0 {
                    v.push(Some((x, y)));
                }
            }
        }
        v
    }

    fn add(&self, p: Pt, r: Pt) -> Pt {
        let q = self.q;
        let ((x1, y1), (x2, y2)) = match (p, r) {
            (None, _) => return r,
            (_, None) => return p,
            (Some(a), Some(b)) => (a, b),
        };
        let l = if x1 == x2 {
            if (y1 + y2) % q == 0 {
                return None;
            }
            md(3 * x1 * x1 + self.a4, q) * pinv(2 * y1, q) % q
        } else {
            md(y2 - y1, q) * pinv(x2 - x1, q) % q
        };
        let x3 = md(l * l - x1 - x2, q);
        Some((x3, md(l * (x1 - x3) - y1, q)))
    }

    fn order(&self, p: Pt) -> u64 {
        let (mut acc, mut n) = (p, 1);
        while acc.is_some() {
            acc = self.add(acc, p);
            n += 1;
        }
        n
    }

    /// Invariant factors of a group of rank at most two: `[n / e, e]`.
    fn invariant_factors(&self) -> Vec<u64> {
        let pts = self.points();
        let n = pts.len() as u64;
        let e = pts.iter().map(|&p| self.order(p)).max().unwrap();
        [n / e, e].into_iter().filter(|&f| f > 1).collect()
    }
}

fn model_short(a4: i64, a6: i64) -> WeierstrassModel {
    WeierstrassModel::from_ints([0, 0, 0, a4, a6]).unwrap()
}

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

// ---------- criteria ----------

fn split_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut quads = vec![[1, 2, 3, 4]];
    let mut redraws = 0;
    while quads.len() < 21 {
        let q: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-10..=10));
        let s = build_scholten_i64(q[0], q[1], q[2], q[3]);
        if !s.is_smooth() || oracle_good_primes(q[0], q[1], q[2], q[3], 50).len() < 5 {
            redraws += 1;
            continue;
        }
        quads.push(q);
    }
    let primes = primes_up_to(50);
    let mut checked = 0;
    for [a, b, c, d] in quads.iter().copied() {
        let s = build_scholten_i64(a, b, c, d);
        let (lambda, sext) = scholten_oracle(a, b, c, d);
        assert_eq!(s.lambda(), &bi(lambda));
        assert_eq!(s.sextic().coeffs().iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>(), sext);
        let cert = verify_split_jacobian(&s, &primes).unwrap();
        let tested: Vec<i64> = cert.checks.iter().map(|k| k.p as i64).collect();
        assert_eq!(tested, oracle_good_primes(a, b, c, d, 50), "good primes for {:?}", [a, b, c, d]);
        for k in &cert.checks {
            let p = k.p as i64;
            let (n, a1, a2) = (count_c_brute(lambda, &sext, p), ap_pair_brute(a, b, p), ap_pair_brute(c, d, p));
            assert_eq!((k.curve_count as i64, k.ap_e1, k.ap_e2), (n, a1, a2));
            assert_eq!(n, p + 1 - a1 - a2, "{:?} at p = {p}", [a, b, c, d]);
            assert!(k.pass);
            checked += 1;
        }
        assert!(cert.verdict);
    }
    let s = build_scholten_i64(1, 2, 3, 4);
    let wrong = TwoTorsionCurve::from_i64(1, 3).unwrap();
    let own_e2 = s.e2().unwrap().clone();
    let neg = verify_split_jacobian_against(&s, &wrong, &own_e2, &primes).unwrap();
    assert!(!neg.verdict && neg.failures().count() > 0);
    println!("    {checked} prime checks over {} quadruples ({redraws} redraws), negative control fails at {:?}",
        quads.len(), neg.failures().map(|k| k.p).collect::<Vec<_>>());
}

fn orbit_invariance() {
    let j_oracle = |a: i64, b: i64| {
        let (a, b) = (bi(a), bi(b));
        let k = &a * &a - &a * &b + &b * &b;
        let dd = &a * &b * (&a - &b);
        BigRat::new(bi(256) * &k * &k * &k, &dd * &dd)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let (a, b) = (rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        if a == 0 || b == 0 || a == b {
            continue;
        }
        let j = j_oracle(a, b);
        let orbit = torsion_forms_orbit(&bi(a), &bi(b)).unwrap();
        assert!(orbit.contains(&(bi(a), bi(b))));
        for (x, y) in &orbit {
            let (x, y) = (x.to_i64().unwrap(), y.to_i64().unwrap());
            assert_eq!(j_oracle(x, y), j, "({a},{b}) -> ({x},{y})");
            assert_eq!(TwoTorsionCurve::from_i64(x, y).unwrap().j_invariant(), j);
        }
        done += 1;
    }
    let got: BTreeSet<(i64, i64)> = torsion_forms_orbit(&bi(1), &bi(-1))
        .unwrap()
        .into_iter()
        .map(|(x, y)| (x.to_i64().unwrap(), y.to_i64().unwrap()))
        .collect();
    let want: BTreeSet<(i64, i64)> = [(1, -1), (-1, 1), (-1, -2), (-2, -1), (1, 2), (2, 1)].into();
    assert_eq!(got, want);
}

fn supersingular_oracle() {
    let scan = supersingular_scan(&model_short(-1, 0), 200);
    let brute: Vec<u64> = primes_up_to(200)
        .into_iter()
        .filter(|&p| p > 2 && ap_pair_brute(1, -1, p as i64).rem_euclid(p as i64) == 0)
        .collect();
    let mod4: Vec<u64> = primes_up_to(200).into_iter().filter(|p| p % 4 == 3).collect();
    assert_eq!(brute, mod4);
    assert_eq!(scan.primes, brute);
    println!("    {} supersingular primes of {} tested", scan.primes.len(), scan.good_primes_tested);
}

fn conductor_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut corpus: Vec<WeierstrassModel> = Vec::new();
    while corpus.len() < 30 {
        let (a, b) = (rng.gen_range(-30..=30), rng.gen_range(-30..=30));
        if let Ok((_, m)) = curve_from_pair(&bi(a), &bi(b)) {
            corpus.push(m);
        }
    }
    while corpus.len() < 50 {
        let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        if let Ok(m) = WeierstrassModel::from_ints(a) {
            corpus.push(m);
        }
    }
    let mut checks = 0;
    for m in &corpus {
        let disc = m.discriminant();
        let mut primes: BTreeSet<u64> = factor(disc.numer()).iter().map(|(p, _)| p.to_u64().unwrap()).collect();
        primes.extend([2, 3, 5, 7, 11, 13]);
        let mut product = BigInt::one();
        for &p in &primes {
            let rep = classify_reduction(m, p).unwrap();
            let min = minimal_model_at(m, p).unwrap().model;
            let v_disc = valuation(min.discriminant().numer(), p).unwrap();
            let f = rep.conductor_exponent;
            assert_eq!(f == 0, v_disc == 0, "{m} p={p}");
            assert_eq!(f == 1, rep.actual_type.is_multiplicative(), "{m} p={p}");
            let v_j = rat_valuation(&m.j_invariant(), p).map_or(false, |v| v < 0);
            let v_c4 = rat_valuation(&min.c4(), p) == Some(0);
            assert_eq!(rep.actual_type.is_multiplicative(), v_j && v_c4, "{m} p={p}");
            product *= BigInt::from(p).pow(f);
            checks += 1;
        }
        let n = conductor(m).unwrap();
        assert_eq!(n, product, "{m}");
        let exps: BTreeSet<(u64, u32)> = local_conductor_exponents(m).into_iter().filter(|&(_, f)| f > 0).collect();
        assert_eq!(exps.iter().fold(BigInt::one(), |acc, &(p, f)| acc * BigInt::from(p).pow(f)), n);
        for (u, r, s, t) in [(2, 1, 0, -1), (3, 0, 1, 2), (6, -2, 1, 0)] {
            let w = ModelTransform::new(BigRat::from(bi(u)), BigRat::from(bi(r)), BigRat::from(bi(s)), BigRat::from(bi(t))).unwrap();
            let moved = m.transform(&w);
            assert_eq!(conductor(&moved).unwrap(), n, "{m} under {u},{r},{s},{t}");
            let back = m.transform(&w.inverse());
            assert_eq!(conductor(&back).unwrap(), n);
        }
    }
    assert_eq!(conductor(&model_short(-1, 0)).unwrap(), bi(32));
    println!("    {checks} (curve, prime) checks over {} curves", corpus.len());
}

fn global2_filter() {
    let got = global2_prime_filter(&model_short(-1, 0), 2, 20).unwrap();
    assert_eq!(got, vec![5, 7, 11, 13, 17, 19]);
    // Odd bad primes of E_{a,b}: those dividing ab(a-b) once common
    // factors p^2 of a and b are scaled away.
    let oracle = |a: i64, b: i64, deg: u64, bound: u64| -> Vec<u64> {
        (5..=bound)
            .filter(|&p| is_prime(p) && deg % p != 0)
            .filter(|&p| {
                let q = p as i64;
                let (mut x, mut y) = (a, b);
                while x % (q * q) == 0 && y % (q * q) == 0 {
                    x /= q * q;
                    y /= q * q;
                }
                (x * y * (x - y)) % q != 0
            })
            .collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 50 {
        let (a, b) = (rng.gen_range(-200..=200), rng.gen_range(-200..=200));
        let Ok((_, m)) = curve_from_pair(&bi(a), &bi(b)) else { continue };
        let deg = rng.gen_range(1..=30);
        let bound = rng.gen_range(10..=150);
        let lib: BTreeSet<u64> = global2_prime_filter(&m, deg, bound).unwrap().into_iter().collect();
        let want: BTreeSet<u64> = oracle(a, b, deg, bound).into_iter().collect();
        assert_eq!(lib, want, "E_{{{a},{b}}} deg {deg} bound {bound}");
        done += 1;
    }
}

fn skew_prover() {
    let mut lines = Vec::new();
    for q in [5u64, 7, 11, 13] {
        let g = rational_points_mod_p(&model_short(-1, 0), q).unwrap();
        let tail = g.points().iter().copied().find(|p| !p.is_infinity()).unwrap();
        let mut negatives = 0;
        for (r, t) in [(2usize, vec![]), (3, vec![tail])] {
            for conv in [ThirdPoint::NegatedSum, ThirdPoint::Sum] {
                let proof = prove_skew(&g, r, &t, conv).unwrap();
                let rep = &proof.report;
                let n = g.order() as usize;
                assert!(rep.success, "q={q} r={r} {conv:?}");
                assert_eq!((rep.pairs, rep.pairs_proved), (n * n, n * n));
                assert_eq!((rep.two_torsion, rep.two_torsion_proved), (n, n));
                for (rec, target) in proof.records.iter().zip(&proof.targets) {
                    if rec.derivable {
                        assert_eq!(&proof.lattice.combination(&rec.certificate), target);
                    } else {
                        let w = rec.witness.as_ref().unwrap();
                        for col in proof.lattice.columns() {
                            assert!(w.reduce(&w.evaluate(&col.vector)).is_zero());
                        }
                        assert!(!w.reduce(&w.evaluate(target)).is_zero());
                    }
                }
                negatives += rep.negative_control.is_some() as usize;
            }
        }
        assert!(negatives > 0, "no negative control over F_{q}");
        lines.push(format!("q={q}: {} points, {negatives}/4 runs with a certified non-member", g.order()));
    }
    for l in lines {
        println!("    {l}");
    }
}

fn filtration_quotients() {
    let mut groups: Vec<(String, FinAbGroup, Vec<u64>)> = vec![
        ("Z/2".into(), FinAbGroup::new(&[2]).unwrap(), vec![2]),
        ("Z/3".into(), FinAbGroup::new(&[3]).unwrap(), vec![3]),
        ("Z/4".into(), FinAbGroup::new(&[4]).unwrap(), vec![4]),
        ("Z/2xZ/4".into(), FinAbGroup::new(&[2, 4]).unwrap(), vec![2, 4]),
    ];
    for q in [5u64, 11] {
        let e = Short { a4: -1, a6: 0, q: q as i64 };
        let g = rational_points_mod_p(&model_short(-1, 0), q).unwrap();
        groups.push((format!("E(F_{q})"), FinAbGroup::from_curve_group(&g), e.invariant_factors()));
    }
    for (name, g, oracle) in &groups {
        let rep = aug_filtration(g, 3).unwrap();
        assert_eq!(&rep.steps[0].invariant_factors, oracle, "{name}");
        assert!(rep.exactness(), "{name}");
        for r in 1..=3 {
            let gr = gr_generators(g, r).unwrap();
            let prod = product_generators(g, r).unwrap();
            assert!(same_lattice(g, &gr, &prod), "{name} r={r}");
        }
        println!("    {name}: {:?}", rep.steps.iter().map(|s| s.invariant_factors.clone()).collect::<Vec<_>>());
    }
    let z2 = aug_filtration(&FinAbGroup::new(&[2]).unwrap(), 3).unwrap();
    assert_eq!(z2.steps.iter().map(|s| s.invariant_factors.clone()).collect::<Vec<_>>(), vec![vec![2], vec![2], vec![2]]);
}

fn product_decomposition() {
    let e1 = rational_points_mod_p(&model_short(-1, 0), 5).unwrap();
    let e2 = rational_points_mod_p(&model_short(1, 2), 5).unwrap();
    assert_eq!((e1.order(), e2.order()), (8, 4));
    let a = SlotGroup::product(vec![e1.clone(), e2.clone()]).unwrap();
    let u = SymbolUniverse::free(&[a.clone(), a.clone()]).unwrap();
    let mut tested = 0;
    for s0 in 0..a.order() {
        for s1 in 0..a.order() {
            let d = product_decompose(&u, &[s0, s1]).unwrap();
            assert!(d.round_trip);
            for t in &d.terms {
                for (j, &emb) in t.embedded.iter().enumerate() {
                    let back = a.project(t.factors[j], emb);
                    assert_eq!(back, t.points[j]);
                    assert_eq!(a.element([s0, s1][j])[t.factors[j]], back);
                }
            }
            tested += 1;
        }
    }
    let x1 = PointModP::affine(2, 1);
    let y1 = PointModP::affine(1, 2);
    let x2 = PointModP::affine(3, 2);
    let y2 = PointModP::affine(4, 0);
    let p = a.index(&[x1, y1]).unwrap();
    let q = a.index(&[x2, y2]).unwrap();
    let d = product_decompose(&u, &[p, q]).unwrap();
    assert_eq!(d.terms.len(), 4);
    let mut bil = bilinear_relations_generating(&u, 0).unwrap();
    bil.extend(bilinear_relations_generating(&u, 1).unwrap());
    let lattice = RelationLattice::new(&u, bil).unwrap();
    let diff = d.reembedded(&u).unwrap().sub(&SymbolSum::symbol(&u, &[p, q]).unwrap()).unwrap();
    let m = prove_member(&diff, &lattice).unwrap();
    let cert = m.certificate().expect("difference lies in the bilinear lattice");
    assert_eq!(lattice.combination(cert), diff);
    println!("    {tested} symbols round-trip; 4-term expansion certified with {} columns", cert.len());
}

fn cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_isogeny-forge");
    let run = |args: &[&str], cache: Option<&std::path::Path>| {
        let mut cmd = Process::new(bin);
        cmd.args(args).env_remove(isogeny_forge_cli::CACHE_ENV);
        if let Some(c) = cache {
            cmd.arg("--cache-dir").arg(c);
        }
        let out = cmd.output().unwrap();
        (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
    };
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let verify = ["scholten", "verify", "--params", "1,2,3,4", "--primes", "50"];
    let (c0, cold) = run(&verify, Some(&cache));
    assert!(cache.join("conductors.json").exists());
    let (c1, warm) = run(&verify, Some(&cache));
    let (c2, none) = run(&verify, None);
    assert_eq!((c0, c1, c2), (0, 0, 0));
    let strip = |s: &str| s.lines().map(|l| strip_timing(l).unwrap()).collect::<Vec<_>>();
    assert_eq!(strip(&cold).len(), 1);
    assert_eq!(strip(&cold), strip(&warm));
    assert_eq!(strip(&cold), strip(&none));
    assert_eq!(strip(&cold)[0]["outputs"]["verdict"], "pass");
    let timing_re = |s: &str| {
        let i = s.find("\"timing\"").unwrap();
        s[..i].to_string()
    };
    assert_eq!(timing_re(&cold), timing_re(&warm));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "a,b,c,d\n").unwrap();
    let bad_csv = dir.path().join("bad.csv");
    std::fs::write(&bad_csv, "a,b,c,d\n1,2,x,4\n").unwrap();
    let not_dir = dir.path().join("file");
    std::fs::write(&not_dir, "").unwrap();
    let empty_s = empty.to_str().unwrap();
    let bad_s = bad_csv.to_str().unwrap();
    let file_s = not_dir.to_str().unwrap();
    let matrix: Vec<(Vec<&str>, i32)> = vec![
        (verify.to_vec(), 0),
        (vec!["scholten", "verify", "--params", "1,2,3,4", "--primes", "50", "--e1", "1,3"], 1),
        (vec!["scholten", "verify", "--grid", empty_s], 0),
        (vec!["analyze-curve", "--a", "1", "--b", "-1", "--primes", "3..50"], 0),
        (vec!["analyze-curve", "--a", "1"], 2),
        (vec!["scholten", "verify", "--params", "1,2,3"], 2),
        (vec!["scholten", "verify", "--params", "1,2,3,4", "--bogus"], 2),
        (vec!["frobnicate"], 2),
        (vec!["kgroup", "prove-skew", "--a", "1", "--b", "-1", "--q", "5", "--r", "3"], 2),
        (vec!["scholten", "verify", "--grid", bad_s], 2),
        (vec!["scholten", "verify", "--params", "1,2,1,2"], 1),
        (vec!["scholten", "verify", "--grid", "/nonexistent/grid.csv"], 3),
        (vec!["scholten", "build", "--params", "1,2,3,4", "--out", "/nonexistent/dir/out.jsonl"], 3),
        (vec!["scholten", "build", "--params", "1,2,3,4", "--cache-dir", file_s], 3),
    ];
    for (args, want) in &matrix {
        let (code, out) = run(args, None);
        assert_eq!(code, *want, "{args:?}");
        if args.contains(&empty_s) {
            assert!(out.is_empty());
        }
    }
    println!("    cold/warm/uncached records identical; {} exit-code cases", matrix.len());
}

fn main() {
    let criteria: [(&str, u64, fn()); 9] = [
        ("split-Jacobian certificate", 10, split_jacobian),
        ("orbit invariance", 1, orbit_invariance),
        ("supersingular scan oracle", 1, supersingular_oracle),
        ("conductor/Tate consistency", 5, conductor_consistency),
        ("global2 prime filter", 1, global2_filter),
        ("skew-symmetry prover", 60, skew_prover),
        ("filtration quotients", 30, filtration_quotients),
        ("product decomposition", 10, product_decomposition),
        ("CLI determinism and exit codes", 5, cli_determinism),
    ];
    panic::set_hook(Box::new(|info| eprintln!("    {info}")));
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(f)).is_ok();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        let note = if ok && !in_time { " (over budget)" } else { "" };
        println!("{verdict} {}. {name} [{:.2}s / {budget}s]{note}", i + 1, elapsed.as_secs_f64());
        failed += (verdict == "FAIL") as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
