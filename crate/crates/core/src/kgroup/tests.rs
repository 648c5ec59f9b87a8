use super::*;
use crate::elliptic::{rational_points_mod_p, WeierstrassModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn curve(a: [i64; 5], q: u64) -> CurveGroupModP {
    rational_points_mod_p(&WeierstrassModel::from_ints(a).unwrap(), q).unwrap()
}

fn e5() -> Arc<SlotGroup> {
    SlotGroup::curve(curve([0, 0, 0, -1, 0], 5))
}

fn pt(g: &SlotGroup, x: u64, y: u64) -> usize {
    g.index(&[PointModP::affine(x, y)]).unwrap()
}

fn sym(u: &Arc<SymbolUniverse>, t: &[usize], c: i64) -> SymbolSum {
    SymbolSum::symbol(u, t).unwrap().scale(&BigInt::from(c))
}

fn sum(parts: &[SymbolSum]) -> SymbolSum {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p).unwrap())
}

#[test]
fn symbol_sums_are_canonical() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    let a = pt(&g, 0, 0);
    let s = sym(&u, &[a, a], 2).add(&sym(&u, &[a, a], -2)).unwrap();
    assert!(s.is_zero());
    let t = sym(&u, &[a, 0], 3).add(&sym(&u, &[a, 0], 4)).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.coefficient(&[a, 0]), BigInt::from(7));
    assert!(SymbolSum::symbol(&u, &[a, 99]).is_err());
    assert!(SymbolSum::symbol_at(&u, &[vec![PointModP::affine(0, 1)], vec![PointModP::Infinity]]).is_err());
}

#[test]
fn bilinear_examples() {
    let g = e5();
    assert_eq!(g.order(), 8);
    let u = SymbolUniverse::free(&[g.clone()]).unwrap();
    let cols = bilinear_relations(&u, 0).unwrap();
    assert_eq!(cols.len(), 64);
    let zero = g.zero();
    for a in 0..8 {
        let with_zero = cols.iter().find(|c| c.inputs == vec![a, zero]).unwrap();
        assert_eq!(with_zero.vector, sym(&u, &[zero], -1));
        let minus = cols.iter().find(|c| c.inputs == vec![a, g.neg(a)]).unwrap();
        let expect = if a == zero {
            sym(&u, &[zero], -1)
        } else if g.neg(a) == a {
            sum(&[sym(&u, &[zero], 1), sym(&u, &[a], -2)])
        } else {
            sum(&[sym(&u, &[zero], 1), sym(&u, &[a], -1), sym(&u, &[g.neg(a)], -1)])
        };
        assert_eq!(minus.vector, expect);
    }
    let fixed = SymbolUniverse::new(vec![Slot::free(&g), Slot::fixed(&g, 1)]).unwrap();
    assert!(matches!(bilinear_relations(&fixed, 1), Err(Error::InvalidConfiguration(_))));
}

#[test]
fn generating_increments_span_all_bilinear_relations() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    for slot in 0..2 {
        let full = RelationLattice::new(&u, bilinear_relations(&u, slot).unwrap()).unwrap();
        let gens = RelationLattice::new(&u, bilinear_relations_generating(&u, slot).unwrap()).unwrap();
        for c in full.columns() {
            assert!(prove_member(&c.vector, &gens).unwrap().is_derivable());
        }
        for c in gens.columns() {
            assert!(prove_member(&c.vector, &full).unwrap().is_derivable());
        }
    }
}

#[test]
fn vertical_examples() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    let z = g.zero();
    assert!(wr_vertical(&u, z, &[]).unwrap().vector.is_zero());
    let t = pt(&g, 0, 0);
    assert_eq!(wr_vertical(&u, t, &[]).unwrap().vector, sum(&[sym(&u, &[t, t], 2), sym(&u, &[z, z], -2)]));
    let a = pt(&g, 2, 1);
    let v = wr_vertical(&u, a, &[]).unwrap().vector;
    assert_eq!(v.len(), 3);
    assert_eq!(v, sum(&[sym(&u, &[a, a], 1), sym(&u, &[g.neg(a), g.neg(a)], 1), sym(&u, &[z, z], -2)]));

    let other = SlotGroup::curve(curve([0, 0, 0, 1, 1], 5));
    let mixed = SymbolUniverse::free(&[g.clone(), other]).unwrap();
    assert!(matches!(wr_vertical(&mixed, a, &[]), Err(Error::InvalidConfiguration(_))));
    assert!(matches!(wr_vertical(&u, a, &[0]), Err(Error::InvalidConfiguration(_))));
}

#[test]
fn line_examples() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    let z = g.zero();
    let bil = RelationLattice::new(
        &u,
        [bilinear_relations(&u, 0).unwrap(), bilinear_relations(&u, 1).unwrap()].concat(),
    )
    .unwrap();
    for a in 0..8 {
        let vert = wr_vertical(&u, a, &[]).unwrap().vector;
        assert_eq!(wr_line(&u, a, z, &[], ThirdPoint::NegatedSum).unwrap().vector, vert);
        let printed = wr_line(&u, a, z, &[], ThirdPoint::Sum).unwrap().vector;
        assert!(prove_member(&printed.sub(&vert).unwrap(), &bil).unwrap().is_derivable());
    }
    let t = pt(&g, 0, 0);
    for conv in [ThirdPoint::NegatedSum, ThirdPoint::Sum] {
        let v = wr_line(&u, t, t, &[], conv).unwrap().vector;
        assert_eq!(v, sum(&[sym(&u, &[t, t], 2), sym(&u, &[z, z], -2)]));
    }
    let (a1, a2) = (pt(&g, 2, 1), pt(&g, 3, 2));
    for conv in [ThirdPoint::NegatedSum, ThirdPoint::Sum] {
        let c = wr_line(&u, a1, a2, &[], conv).unwrap();
        let s = c.vector.entries().iter().map(|(t, _)| t[0]).find(|&x| x != a1 && x != a2 && x != z).unwrap();
        assert_eq!(c.vector.len(), 4);
        let expect = if conv == ThirdPoint::Sum { g.add(a1, a2) } else { g.neg(g.add(a1, a2)) };
        assert_eq!(s, expect);
    }
}

#[test]
fn membership_examples() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    let mut cols = bilinear_relations_generating(&u, 0).unwrap();
    cols.extend((0..8).map(|a| wr_vertical(&u, a, &[]).unwrap()));
    let lat = RelationLattice::new(&u, cols).unwrap();
    assert_eq!(prove_member(&SymbolSum::zero(&u), &lat).unwrap(), Membership::Derivable(vec![]));
    let c = lat.columns()[5].vector.clone();
    let cert = prove_member(&c, &lat).unwrap();
    assert_eq!(lat.combination(cert.certificate().unwrap()), c);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let mut target = SymbolSum::zero(&u);
        for _ in 0..3 {
            let k = rng.gen_range(0..lat.columns().len());
            target = target.add(&lat.columns()[k].vector.scale(&BigInt::from(rng.gen_range(-5..6)))).unwrap();
        }
        let m = prove_member(&target, &lat).unwrap();
        assert_eq!(lat.combination(m.certificate().unwrap()), target);
    }

    let other = SymbolUniverse::free(&[g.clone()]).unwrap();
    assert!(matches!(prove_member(&SymbolSum::zero(&other), &lat), Err(Error::InvalidArgument(_))));
}

#[test]
fn skew_over_f5() {
    let e = curve([0, 0, 0, -1, 0], 5);
    for conv in [ThirdPoint::NegatedSum, ThirdPoint::Sum] {
        let proof = prove_skew(&e, 2, &[], conv).unwrap();
        let rep = &proof.report;
        assert!(rep.success);
        assert_eq!(rep.pairs, 64);
        assert_eq!(rep.pairs_proved, 64);
        assert_eq!(rep.two_torsion_proved, 8);
        let neg = rep.negative_control.as_ref().expect("some lone symbol is not derivable");
        assert!(!neg.witness.modulus.is_zero() || neg.witness.functional.len() > 0);
        for (rec, target) in proof.records.iter().zip(&proof.targets) {
            if rec.derivable {
                assert_eq!(&proof.lattice.combination(&rec.certificate), target);
            }
        }
        assert_eq!(proof.to_json_lines().lines().count(), proof.records.len());
    }
    let tail = [PointModP::affine(0, 0)];
    let proof = prove_skew(&e, 3, &tail, ThirdPoint::NegatedSum).unwrap();
    assert!(proof.report.success);
    assert!(proof.report.negative_control.is_some());
}

#[test]
fn skew_argument_errors() {
    let e = curve([0, 0, 0, -1, 0], 5);
    assert!(matches!(prove_skew(&e, 7, &[PointModP::Infinity; 5], ThirdPoint::Sum), Err(Error::BudgetExceeded(_))));
    assert!(prove_skew(&e, 3, &[], ThirdPoint::Sum).is_err());
    assert!(prove_skew(&e, 3, &[PointModP::affine(1, 1)], ThirdPoint::Sum).is_err());
}

#[test]
fn phi_examples() {
    let g = e5();
    let u = SymbolUniverse::free(&[g.clone(), g.clone()]).unwrap();
    let z = g.zero();
    let bil = RelationLattice::new(
        &u,
        [bilinear_relations_generating(&u, 0).unwrap(), bilinear_relations_generating(&u, 1).unwrap()].concat(),
    )
    .unwrap();
    let p0 = phi_r(&u, &[(z, BigInt::from(1))]).unwrap();
    assert_eq!(p0, sym(&u, &[z, z], 1));
    assert!(prove_member(&p0, &bil).unwrap().is_derivable());
    let (a, b) = (pt(&g, 2, 1), pt(&g, 0, 0));
    assert_eq!(phi_r(&u, &[(a, BigInt::from(1))]).unwrap(), sym(&u, &[a, a], 1));
    let z1 = [(a, BigInt::from(2)), (b, BigInt::from(-1))];
    assert_eq!(phi_r(&u, &z1).unwrap(), sum(&[sym(&u, &[a, a], 2), sym(&u, &[b, b], -1)]));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let cyc = |rng: &mut ChaCha8Rng| -> Vec<(usize, BigInt)> {
            (0..3).map(|_| (rng.gen_range(0..8), BigInt::from(rng.gen_range(-4..5)))).collect()
        };
        let (x, y) = (cyc(&mut rng), cyc(&mut rng));
        let joint: Vec<(usize, BigInt)> = x.iter().chain(&y).cloned().collect();
        assert_eq!(phi_r(&u, &joint).unwrap(), phi_r(&u, &x).unwrap().add(&phi_r(&u, &y).unwrap()).unwrap());
    }
    let fixed = SymbolUniverse::new(vec![Slot::free(&g), Slot::fixed(&g, z)]).unwrap();
    assert!(phi_r(&fixed, &[(a, BigInt::from(1))]).is_err());
}

#[test]
fn product_decomposition_examples() {
    let e1 = curve([0, 0, 0, -1, 0], 5);
    let e2 = curve([0, 0, 0, 1, 1], 5);
    let a = SlotGroup::product(vec![e1.clone(), e2.clone()]).unwrap();
    let u = SymbolUniverse::free(&[a.clone(), a.clone()]).unwrap();
    let x = PointModP::affine(2, 1);
    let y = e2.points().iter().copied().find(|q| !q.is_infinity()).unwrap();
    let p = a.embed(0, &x).unwrap();
    let q = a.embed(1, &y).unwrap();
    let d = product_decompose(&u, &[p, q]).unwrap();
    assert_eq!(d.terms.len(), 1);
    assert_eq!(d.terms[0].factors, vec![0, 1]);
    assert_eq!(d.terms[0].embedded, vec![p, q]);
    assert!(d.round_trip);

    let generic = a.index(&[x, y]).unwrap();
    let other = a.index(&[PointModP::affine(0, 0), y]).unwrap();
    let d = product_decompose(&u, &[generic, other]).unwrap();
    assert_eq!(d.terms.len(), 4);
    assert!(d.round_trip);
    let mut seen: Vec<Vec<usize>> = d.terms.iter().map(|t| t.factors.clone()).collect();
    seen.sort();
    assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    for t in &d.terms {
        for (j, &e) in t.embedded.iter().enumerate() {
            assert_eq!(a.project(t.factors[j], e), t.points[j]);
            assert_eq!(a.embed(t.factors[j], &t.points[j]), Some(e));
        }
    }
}

#[test]
fn slot_group_structure() {
    let e1 = curve([0, 0, 0, -1, 0], 5);
    let e2 = curve([0, 0, 0, 1, 1], 5);
    let a = SlotGroup::product(vec![e1.clone(), e2.clone()]).unwrap();
    assert_eq!(a.order(), e1.points().len() * e2.points().len());
    for i in 0..a.order() {
        assert_eq!(a.add(i, a.neg(i)), a.zero());
        assert_eq!(a.index(&a.element(i)), Some(i));
        let c = a.element(i);
        let rebuilt = a.add(a.embed(0, &c[0]).unwrap(), a.embed(1, &c[1]).unwrap());
        assert_eq!(rebuilt, i);
    }
    assert!(SlotGroup::product(vec![e1, curve([0, 0, 0, -1, 0], 7)]).is_err());
}
