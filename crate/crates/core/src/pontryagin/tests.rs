use super::*;
use crate::elliptic::{rational_points_mod_p, WeierstrassModel};
use crate::exactnum::primes_up_to;

fn g(m: &[u64]) -> FinAbGroup {
    FinAbGroup::new(m).unwrap()
}

fn factors(report: &FiltrationReport) -> Vec<Vec<u64>> {
    report.steps.iter().map(|s| s.invariant_factors.clone()).collect()
}

#[test]
fn group_normalisation() {
    assert_eq!(g(&[2, 3]).invariant_factors(), &[6]);
    assert_eq!(g(&[4, 2]).invariant_factors(), &[2, 4]);
    assert_eq!(g(&[1]).invariant_factors(), &[] as &[u64]);
    assert!(FinAbGroup::new(&[0]).is_err());
    let h = g(&[2, 4]);
    for i in 0..8 {
        assert_eq!(h.index(&h.element(i)), i);
        assert_eq!(h.add(i, h.neg(i)), 0);
    }
}

#[test]
fn product_examples() {
    let h = g(&[2, 4]);
    let z = GroupRingElement::basis(&h, 3).scale(&BigInt::from(5)).add(&GroupRingElement::basis(&h, 6)).unwrap();
    assert_eq!(GroupRingElement::basis(&h, 0).pontryagin_product(&z).unwrap(), z);
    for a in 0..8 {
        for b in 0..8 {
            let p = GroupRingElement::basis(&h, a).pontryagin_product(&GroupRingElement::basis(&h, b)).unwrap();
            assert_eq!(p, GroupRingElement::basis(&h, h.add(a, b)));
            let q = GroupRingElement::augmented(&h, a).pontryagin_product(&GroupRingElement::augmented(&h, b)).unwrap();
            let mut expect = GroupRingElement::zero(&h);
            for (e, s) in [(h.add(a, b), 1), (a, -1), (b, -1), (0, 1)] {
                expect = expect.add(&GroupRingElement::basis(&h, e).scale(&BigInt::from(s))).unwrap();
            }
            assert_eq!(q, expect);
        }
    }
    let other = g(&[3]);
    assert!(GroupRingElement::basis(&h, 1).pontryagin_product(&GroupRingElement::basis(&other, 1)).is_err());
}

#[test]
fn generator_examples() {
    let h = g(&[3, 3]);
    let g1 = gr_generators(&h, 1).unwrap();
    assert_eq!(g1.len(), 9);
    for (a, e) in g1.iter().enumerate() {
        assert_eq!(e, &GroupRingElement::augmented(&h, a));
    }
    let g2 = gr_generators(&h, 2).unwrap();
    for (k, e) in g2.iter().enumerate() {
        let (a, b) = (k % 9, k / 9);
        let mut expect = GroupRingElement::zero(&h);
        for (x, s) in [(h.add(a, b), 1), (a, -1), (b, -1), (0, 1)] {
            expect = expect.add(&GroupRingElement::basis(&h, x).scale(&BigInt::from(s))).unwrap();
        }
        assert_eq!(e, &expect);
    }
    for r in 1..=3 {
        for e in gr_generators(&h, r).unwrap() {
            assert!(e.degree().is_zero());
        }
    }
    assert!(matches!(gr_generators(&g(&[100]), 4), Err(Error::BudgetExceeded(_))));
}

#[test]
fn alternating_sums_equal_products() {
    for m in [&[2u64][..], &[6], &[2, 2], &[2, 4]] {
        let h = g(m);
        for r in 1..=3 {
            let alt = gr_generators(&h, r).unwrap();
            let prod = product_generators(&h, r).unwrap();
            assert_eq!(alt, prod);
            assert!(same_lattice(&h, &alt, &prod));
        }
    }
}

#[test]
fn restricted_generators_span_the_full_enumeration() {
    for m in [&[2u64][..], &[3], &[4], &[2, 2], &[2, 4], &[6], &[3, 3]] {
        let h = g(m);
        for r in 1..=3 {
            assert!(same_lattice(&h, &gr_generators(&h, r).unwrap(), &ideal_power_generators(&h, r)), "{m:?} r={r}");
        }
    }
}

// Oracle: index of I^r in the (saturated) augmentation lattice equals the
// product of the nonzero SNF invariant factors of a full generator matrix.
fn index_in_augmentation(h: &FinAbGroup, r: usize) -> BigInt {
    let cols: Vec<Vec<BigInt>> = gr_generators(h, r).unwrap().iter().map(|e| e.to_dense()).collect();
    let m = IntMatrix::from_columns(h.order() as usize, &cols).unwrap();
    smith_normal_form(&m).into_iter().filter(|f| !f.is_zero()).product()
}

#[test]
fn small_cyclic_examples() {
    let r2 = aug_filtration(&g(&[2]), 3).unwrap();
    assert_eq!(factors(&r2), vec![vec![2], vec![2], vec![2]]);
    let r3 = aug_filtration(&g(&[3]), 3).unwrap();
    assert_eq!(factors(&r3), vec![vec![3], vec![3], vec![3]]);
    for (h, n) in [(g(&[2]), 2), (g(&[3]), 3)] {
        for r in 1..=3 {
            let ratio = index_in_augmentation(&h, r + 1) / index_in_augmentation(&h, r);
            assert_eq!(ratio, BigInt::from(n));
        }
    }
    let t = aug_filtration(&FinAbGroup::trivial(), 3).unwrap();
    assert!(t.steps.iter().all(|s| s.invariant_factors.is_empty()));
    assert!(t.exactness());
}

#[test]
fn quotient_orders_match_index_oracle() {
    for m in [&[4u64][..], &[2, 2], &[2, 4], &[6], &[5]] {
        let h = g(m);
        let rep = aug_filtration(&h, 3).unwrap();
        for s in &rep.steps {
            let ratio = index_in_augmentation(&h, s.r + 1) / index_in_augmentation(&h, s.r);
            assert_eq!(BigInt::from(s.order()), ratio, "{m:?} r={}", s.r);
        }
    }
}

fn curve_group(a: [i64; 5], p: u64) -> FinAbGroup {
    FinAbGroup::from_curve_group(&rational_points_mod_p(&WeierstrassModel::from_ints(a).unwrap(), p).unwrap())
}

#[test]
fn first_quotient_is_the_group() {
    let mut groups = vec![g(&[2]), g(&[3]), g(&[4]), g(&[2, 4]), g(&[2, 2]), g(&[12]), g(&[3, 3])];
    for p in primes_up_to(31).into_iter().skip(1) {
        for a in [[0, 0, 0, -1, 0], [0, 0, 0, 1, 1], [0, -1, 1, 0, 0]] {
            if let Ok(pts) = rational_points_mod_p(&WeierstrassModel::from_ints(a).unwrap(), p) {
                groups.push(FinAbGroup::from_curve_group(&pts));
            }
        }
    }
    for h in groups {
        let rep = aug_filtration(&h, 1).unwrap();
        assert!(rep.exactness(), "{:?}", h.invariant_factors());
    }
}

#[test]
fn curve_groups_over_small_fields() {
    let e5 = curve_group([0, 0, 0, -1, 0], 5);
    assert_eq!(e5.invariant_factors(), &[2, 4]);
    let e11 = curve_group([0, 0, 0, -1, 0], 11);
    assert_eq!(e11.order(), 12);
    for h in [e5, e11] {
        let rep = aug_filtration(&h, 2).unwrap();
        assert!(rep.exactness());
        assert_eq!(rep.steps[0].invariant_factors, h.invariant_factors());
    }
}

#[test]
fn cyclic_p_group_exponents_do_not_increase() {
    for n in [2u64, 3, 4, 5, 8, 9, 16, 25, 27] {
        let rep = aug_filtration(&g(&[n]), 6).unwrap();
        let exps: Vec<u64> = rep.steps.iter().map(FiltrationStep::exponent).collect();
        assert!(exps.windows(2).all(|w| w[1] <= w[0]), "Z/{n}: {exps:?}");
    }
}

#[test]
fn budgets_and_stabilization() {
    assert!(matches!(aug_filtration(&g(&[10_007]), 1), Err(Error::BudgetExceeded(_))));
    assert!(matches!(aug_filtration(&g(&[2]), 13), Err(Error::BudgetExceeded(_))));
    assert_eq!(aug_filtration(&g(&[2]), 4).unwrap().stabilization, Some(1));
}
