use std::f64::consts::PI;

use cm_glue_core::arrangement::{reflection, ShortRoot};
use cm_glue_core::cyclotomic::quintic;
use cm_glue_core::gluing::*;
use cm_glue_core::hermitian::HermitianLattice;
use cm_glue_core::involutions::reference_involutions;
use cm_glue_core::matrix::{unit_vector, CycMatrix, CycVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn model(n: usize, m: u32, a: usize, b: usize) -> LocalModel {
    LocalModel::new(n, m, a, b).unwrap()
}

#[test]
fn involution_counts() {
    assert_eq!(involutions_at_center(&model(2, 10, 0, 0)).len(), 1);
    assert_eq!(involutions_at_center(&model(2, 10, 1, 0)).len(), 10);
    assert_eq!(involutions_at_center(&model(2, 10, 0, 2)).len(), 100);
    for m in [4u32, 6, 10] {
        for n in 1..=4usize {
            for a in 0..=n / 2 {
                for b in 0..=n - 2 * a {
                    let invs = involutions_at_center(&model(n, m, a, b));
                    assert_eq!(invs.len(), (m as usize).pow((a + b) as u32));
                    assert!(invs.iter().all(|i| i.squares_to_identity()));
                    let distinct: std::collections::HashSet<_> =
                        invs.iter().map(|i| (&i.perm, &i.exps)).collect();
                    assert_eq!(distinct.len(), invs.len());
                }
            }
        }
    }
}

#[test]
fn invalid_models() {
    assert!(LocalModel::new(2, 10, 1, 1).is_err());
    assert!(LocalModel::new(2, 5, 0, 0).is_err());
    assert!(LocalModel::new(3, 10, 1, 1).is_ok());
}

#[test]
fn involutions_square_to_identity_numerically() {
    let md = model(4, 10, 1, 2);
    let t: Vec<Complex64> = (0..4)
        .map(|k| Complex64::new(0.1 * k as f64 + 0.05, -0.07 * k as f64))
        .collect();
    for inv in involutions_at_center(&md).iter().step_by(13) {
        let back = inv.apply(&inv.apply(&t));
        for (a, b) in back.iter().zip(&t) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn component_examples() {
    let r = components_mod_bf(&model(2, 10, 1, 0));
    assert_eq!(r.copies, 10);
    assert_eq!(r.pairwise_intersection_dims.len(), 1);
    assert_eq!(r.pairwise_intersection_dims[&0], 45);
    assert_eq!(components_mod_bf(&model(2, 10, 0, 1)).copies, 1);
    let md = model(4, 10, 2, 0);
    assert_eq!(intersection_dimension(&md, &[3, 7], &[3, 1]), 2);
    let r = components_mod_bf(&md);
    assert_eq!(r.copies, 100);
    // pairs agreeing in exactly one slot meet in dimension 2, the others in a point
    assert_eq!(r.pairwise_intersection_dims[&2], 100 * 18 / 2);
    assert_eq!(r.pairwise_intersection_dims[&0], 100 * 81 / 2);
}

#[test]
fn intersection_formula_matches_rank_computation() {
    for m in [4u32, 6, 10] {
        for n in 1..=4usize {
            for a in 0..=n / 2 {
                for b in 0..=n - 2 * a {
                    let md = model(n, m, a, b);
                    let invs = involutions_at_center(&md);
                    let step = (invs.len() / 12).max(1);
                    for x in invs.iter().step_by(step) {
                        assert_eq!(intersection_dimension_numeric(x, x), n);
                        for y in invs.iter().step_by(step + 1) {
                            // the formula is for copies modulo B_f, i.e. equal real-node labels
                            if x.label[a..] == y.label[a..] {
                                assert_eq!(
                                    intersection_dimension(&md, &x.label, &y.label),
                                    intersection_dimension_numeric(x, y),
                                    "{md:?} {:?} {:?}",
                                    x.label,
                                    y.label
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn tg_examples() {
    assert_eq!(
        tg_representative(Complex64::new(3.0, 0.0), 10).unwrap(),
        (0, 3.0)
    );
    let (e, r) = tg_representative(Complex64::new(0.0, 3.0), 10).unwrap();
    assert_eq!(e, 1);
    assert!((r - 3.0).abs() < 1e-12);
    let (e, r) = tg_representative(Complex64::new(-5.0, 0.0), 10).unwrap();
    assert_eq!((e, r), (0, 5.0));
    assert!(tg_representative(Complex64::from_polar(1.0, 0.1), 10).is_err());
    // i is not in ⟨ζ_10⟩, so 3i and 3 lie in different orbits
    assert_eq!(
        tg_orbit_representatives(Complex64::new(0.0, 3.0), 10).len(),
        1
    );
}

#[test]
fn fundamental_domains() {
    for (n, m, k) in [(2, 10, 1), (2, 10, 2), (3, 4, 2), (4, 6, 3)] {
        let r = fundamental_domain_check(n, m, k, 1000, 7);
        assert!(r.pass, "{n} {m} {k}: {}", r.max_error);
    }
}

proptest! {
    #[test]
    fn tg_representative_is_orbit_invariant(seed in 0u64..10_000, mi in 0usize..3, shift in 0u32..12) {
        let m = [4u32, 6, 10][mi];
        let mut rng = sample_rng(seed);
        let t = random_t(&mut rng, m);
        let rep = tg_representative(t, m).unwrap();
        let z = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
        let rep2 = tg_representative(t * z.powu(shift), m).unwrap();
        prop_assert_eq!(rep.0, rep2.0);
        prop_assert!((rep.1 - rep2.1).abs() < 1e-9);
        // idempotent
        let w = Complex64::from_polar(1.0, PI / (1u32 << m.trailing_zeros()) as f64);
        let point = w.powu(rep.0 as u32) * rep.1;
        let again = tg_representative(point, m).unwrap();
        prop_assert_eq!(again.0, rep.0);
        // unique in the orbit
        if rep.1 > 1e-6 {
            let reps = tg_orbit_representatives(t, m);
            prop_assert_eq!(reps.len(), 1);
            prop_assert_eq!(reps[0].0, rep.0);
        }
    }
}

#[test]
fn local_equivalence_relation() {
    for md in [
        model(2, 10, 1, 0),
        model(2, 10, 0, 2),
        model(2, 10, 0, 0),
        model(3, 10, 0, 1),
        model(3, 4, 1, 0),
    ] {
        let r = equivalence_relation_bruteforce(&md).unwrap();
        assert!(r.passed(), "{md:?}");
    }
    let r = equivalence_relation_bruteforce(&model(2, 10, 1, 0)).unwrap();
    assert_eq!(r.labels, 10);
    // off the nodes the ten real planes are distinct; at the centre they are glued
    assert_eq!(r.classes["00"], 10);
    assert_eq!(r.classes["11"], 1);
    let r = equivalence_relation_bruteforce(&model(2, 10, 0, 2)).unwrap();
    assert_eq!(r.labels, 100);
    assert_eq!(r.classes["00"], 100);
    assert_eq!(r.classes["10"], 10);
    assert_eq!(r.classes["11"], 1);
    assert_eq!(
        equivalence_relation_bruteforce(&model(2, 10, 0, 0))
            .unwrap()
            .labels,
        1
    );
    assert!(equivalence_relation_bruteforce(&model(4, 10, 1, 1)).is_err());
}

fn ctx() -> GluingContext {
    GluingContext::new(HermitianLattice::quintic_std(), 2).unwrap()
}

fn e(i: usize) -> ShortRoot {
    ShortRoot::new(
        &HermitianLattice::quintic_std(),
        unit_vector(&quintic::field(), 3, i),
    )
    .unwrap()
}

#[test]
fn lattice_level_gluing() {
    let c = ctx();
    let l = c.lattice().clone();
    let f = l.field().clone();
    let [a0, _, _] = reference_involutions(&l).unwrap();
    let x = unit_vector(&f, 3, 2);
    let roots = c.roots_through(&x);
    assert_eq!(roots.len(), 2);
    let p = LabeledPoint::new(x.clone(), a0.clone()).unwrap();
    assert!(c.glue_equivalent(&p, &p, &[e(0), e(1)]).unwrap().equivalent);
    let h = reflection(&l, &e(0), 1).matrix;
    let beta = a0.compose_unitary(&h).unwrap();
    let q = LabeledPoint::new(x.clone(), beta).unwrap();
    let v = c.glue_equivalent(&p, &q, &[e(0), e(1)]).unwrap();
    assert!(v.equivalent && v.group_order == 100);
    let mut swap = CycMatrix::zero(&f, 3, 3);
    swap[(0, 1)] = f.one();
    swap[(1, 0)] = f.one();
    swap[(2, 2)] = f.one();
    let gamma = a0.compose_unitary(&swap).unwrap();
    let s = LabeledPoint::new(x.clone(), gamma).unwrap();
    assert!(!c.glue_equivalent(&p, &s, &[e(0), e(1)]).unwrap().equivalent);
    // −α_0 is the same element of P𝒜
    let neg = LabeledPoint::new(x.clone(), a0.negate()).unwrap();
    assert!(
        c.glue_equivalent(&p, &neg, &[e(0), e(1)])
            .unwrap()
            .equivalent
    );
    // non-maximal root set
    assert_eq!(
        c.glue_equivalent(&p, &q, &[e(0)]).unwrap_err(),
        GluingError::NotMaximal
    );
    // a root not through x
    let y: CycVector = vec![f.one(), f.zero(), f.from_int(2)];
    let py = LabeledPoint::new(y, a0.clone()).unwrap();
    assert_eq!(
        c.glue_equivalent(&py, &p, &[e(0)]).unwrap_err(),
        GluingError::NotIncident(0)
    );
    // different points are never glued
    let v = c.glue_equivalent(&py, &p, &c.roots_through(&py.x)).unwrap();
    assert!(!v.equivalent);
}

#[test]
fn gluing_relation_on_lattice_labels() {
    // all β = φ α_0 with φ in the 100-element group, plus some outside it
    let c = ctx();
    let l = c.lattice().clone();
    let f = l.field().clone();
    let [a0, a1, a2] = reference_involutions(&l).unwrap();
    let x = unit_vector(&f, 3, 2);
    let roots = [e(0), e(1)];
    let mut labels: Vec<LabeledPoint> = Vec::new();
    for base in [&a0, &a1, &a2] {
        for i in [0, 1, 5] {
            for j in [0, 3] {
                let g = &reflection(&l, &e(0), i).matrix * &reflection(&l, &e(1), j).matrix;
                labels
                    .push(LabeledPoint::new(x.clone(), base.compose_unitary(&g).unwrap()).unwrap());
            }
        }
    }
    let n = labels.len();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    c.glue_equivalent(&labels[i], &labels[j], &roots)
                        .unwrap()
                        .equivalent
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        assert!(rel[i][i]);
        for j in 0..n {
            assert_eq!(rel[i][j], rel[j][i]);
            for k in 0..n {
                assert!(!(rel[i][j] && rel[j][k]) || rel[i][k]);
            }
        }
    }
    // α_1 = h_{e_0}^5 α_0 up to sign, α_2 = h_{e_0}^5 h_{e_1}^5 α_0: one class at the centre
    assert!(rel.iter().all(|r| r.iter().all(|&b| b)));
}

#[test]
fn shared_locus() {
    let c = ctx();
    let l = c.lattice().clone();
    let f = l.field().clone();
    let [a0, _, _] = reference_involutions(&l).unwrap();
    let beta = a0
        .compose_unitary(&reflection(&l, &e(0), 5).matrix)
        .unwrap();
    let samples: Vec<CycVector> = (0..3)
        .flat_map(|a| (1..4).map(move |b| (a, b)))
        .map(|(a, b)| vec![f.zero(), f.from_int(a), f.from_int(b)])
        .collect();
    let r = c.shared_locus_check(&a0, &beta, &samples).unwrap();
    assert!(r.checked > 3 && r.equivalent && r.warning.is_none());
    let r = c.shared_locus_check(&a0, &a0, &samples).unwrap();
    assert!(r.equivalent);
    // points off every mirror are never common fixed points of α_0 and h α_0
    let off: Vec<CycVector> = vec![vec![f.one(), f.one(), f.from_int(3)]];
    let r = c.shared_locus_check(&a0, &beta, &off).unwrap();
    assert_eq!(r.checked, 0);
    assert!(r.warning.is_some());
}

#[test]
fn reflection_orders() {
    let l = HermitianLattice::quintic_std();
    assert!(reflection_orders_check(&l, &[e(0), e(1)]).unwrap());
    assert!(reflection_orders_check(&l, &[e(0)]).unwrap());
}
