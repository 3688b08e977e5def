use std::cmp::Ordering;
use std::collections::HashSet;

use cm_glue_core::arrangement::*;
use cm_glue_core::cyclotomic::{quintic, CycElt, RealElt};
use cm_glue_core::hermitian::HermitianLattice;
use cm_glue_core::matrix::{unit_vector, CycMatrix};
use proptest::prelude::*;

fn lattice() -> HermitianLattice {
    HermitianLattice::quintic_std()
}

fn e(i: usize) -> ShortRoot {
    let f = quintic::field();
    ShortRoot::new(&lattice(), unit_vector(&f, 3, i)).unwrap()
}

fn roots(bound: i64) -> Vec<ShortRoot> {
    enumerate_short_roots(&lattice(), bound).unwrap()
}

/// All `μ_10`-translates of a vector, as sorted coefficient tuples.
fn orbit_key(v: &[CycElt]) -> Vec<Vec<i64>> {
    let z = quintic::zeta10();
    let mut keys: Vec<Vec<i64>> = (0..10)
        .map(|k| {
            let u = z.pow(k);
            v.iter()
                .flat_map(|c| (c * &u).i64_coeffs().unwrap())
                .collect()
        })
        .collect();
    keys.sort();
    keys
}

fn elt(c: &[i64]) -> CycElt {
    CycElt::from_ints(&quintic::field(), c)
}

/// Independent enumeration: floating prefilter at the place where `−λ > 0`, exact
/// confirmation through the hermitian form, orbit sets for deduplication.
fn brute_force_count(bound: i64) -> usize {
    let l = lattice();
    let side = 2 * bound + 1;
    let s5 = 5f64.sqrt();
    // ζ_5 at an embedding where λ = 2cos(4π/5) < 0
    let w = num_complex::Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 5.0);
    let mnl = (1.0 + s5) / 2.0;
    let mut box_elems = Vec::new();
    for idx in 0..side.pow(4) {
        let c: Vec<i64> = (0..4).map(|k| (idx / side.pow(k)) % side - bound).collect();
        let z: num_complex::Complex64 = c
            .iter()
            .enumerate()
            .map(|(k, &a)| w.powu(k as u32) * a as f64)
            .sum();
        box_elems.push((c, z.norm_sqr()));
    }
    let small: Vec<&(Vec<i64>, f64)> = box_elems.iter().filter(|(_, n)| *n <= 1.0 + 1e-9).collect();
    let third: Vec<&(Vec<i64>, f64)> = box_elems
        .iter()
        .filter(|(_, n)| mnl * n <= 1.0 + 1e-9)
        .collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    for a in &small {
        for b in &small {
            if a.1 + b.1 > 1.0 + 1e-9 {
                continue;
            }
            for c in &third {
                if (a.1 + b.1 + mnl * c.1 - 1.0).abs() > 1e-6 {
                    continue;
                }
                let v = vec![elt(&a.0), elt(&b.0), elt(&c.0)];
                if l.form(&v, &v).is_one() {
                    seen.insert(orbit_key(&v));
                }
            }
        }
    }
    seen.len()
}

#[test]
fn small_bounds() {
    let r0 = roots(0);
    let mut expected = vec![e(0).canonical(), e(1).canonical()];
    expected.sort_by_key(|r| r.key());
    assert_eq!(r0, expected);
    let r1 = roots(1);
    for i in 0..2 {
        assert!(r1.contains(&e(i).canonical()));
    }
    assert!(!r1
        .iter()
        .any(|r| r.vector()[0].is_zero() && r.vector()[1].is_zero()));
}

#[test]
fn enumeration_matches_brute_force() {
    assert_eq!(roots(1).len(), brute_force_count(1));
    let r2 = roots(2);
    assert_eq!(r2.len(), 762);
    assert_eq!(brute_force_count(2), 762);
}

#[test]
fn enumeration_is_sorted_normalized_and_deterministic() {
    let r = roots(2);
    let l = lattice();
    for w in r.windows(2) {
        assert!(w[0].key() < w[1].key());
    }
    for x in &r {
        assert!(l.form(x.vector(), x.vector()).is_one());
        assert_eq!(&x.canonical(), x);
    }
    assert_eq!(r, roots(2));
    let orbits: HashSet<_> = r.iter().map(|x| orbit_key(x.vector())).collect();
    assert_eq!(orbits.len(), r.len());
}

#[test]
fn reflection_examples() {
    let l = lattice();
    let f = l.field().clone();
    let z = quintic::zeta10();
    let h = reflection(&l, &e(0), 1);
    assert_eq!(
        h.matrix,
        CycMatrix::diagonal(&f, &[z.clone(), f.one(), f.one()])
    );
    assert_eq!(h.order, 10);
    for k in 1..10 {
        assert!(!h.matrix.pow(k).is_identity());
    }
    assert!(h.matrix.pow(10).is_identity());
    let h5 = reflection(&l, &e(0), 5);
    assert_eq!(
        h5.matrix,
        CycMatrix::diagonal(&f, &[f.from_int(-1), f.one(), f.one()])
    );
    assert_eq!(h5.order, 2);
    let h0 = reflection(&l, &e(1), 0);
    assert!(h0.trivial && h0.matrix.is_identity());
    assert_eq!(reflection(&l, &e(0), 4).order, 5);
}

#[test]
fn reflections_fix_their_mirror_and_scale_the_root() {
    let l = lattice();
    let z = quintic::zeta10();
    for r in roots(1).iter().step_by(7) {
        for i in [1, 3, 5] {
            let h = reflection(&l, r, i);
            let hr = h.matrix.apply(r.vector());
            let zi = z.pow(i as u32);
            assert_eq!(hr, r.vector().iter().map(|c| c * &zi).collect::<Vec<_>>());
            // x = e_2 − 𝔥(e_2, r) r is orthogonal to r, hence fixed
            let e2 = unit_vector(l.field(), 3, 2);
            let c = l.form(&e2, r.vector());
            let x: Vec<CycElt> = e2
                .iter()
                .zip(r.vector())
                .map(|(a, b)| a - &(&c * b))
                .collect();
            assert!(l.form(&x, r.vector()).is_zero());
            assert_eq!(h.matrix.apply(&x), x);
        }
    }
}

#[test]
fn relation_examples() {
    let l = lattice();
    let p = hyperbolic_place(&l).unwrap();
    assert_eq!(p, 0);
    assert_eq!(
        hyperplane_relation(&l, p, &e(0), &e(1)).unwrap(),
        Relation::OrthogonalIntersecting
    );
    let ze0 = ShortRoot::new(
        &l,
        e(0).vector()
            .iter()
            .map(|c| c * &quintic::zeta5())
            .collect(),
    )
    .unwrap();
    assert_eq!(
        hyperplane_relation(&l, p, &e(0), &ze0).unwrap(),
        Relation::Equal
    );
    // a strictly disjoint witness: 1 − |𝔥(e_0, t)|² < 0 at the hyperbolic place
    let r = roots(2);
    let witness = r.iter().find(|t| {
        let n = l.form(e(0).vector(), t.vector());
        let gap = RealElt::new(&l.field().one() - &n.norm_to_real()).unwrap();
        gap.sign_at(p).unwrap() == Ordering::Less
    });
    let t = witness.expect("a disjoint pair exists at bound 2");
    assert_eq!(
        hyperplane_relation(&l, p, &e(0), t).unwrap(),
        Relation::DisjointOrBoundary
    );
}

#[test]
fn condition_star_holds() {
    let l = lattice();
    for b in [0, 1, 2] {
        let rs = roots(b);
        let rep = verify_condition_star(&l, &rs).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.relations.intersecting_nonorthogonal, 0);
        assert_eq!(rep.relations.equal, 0);
        assert_eq!(rep.pairs, rs.len() * (rs.len() - 1) / 2);
    }
    let empty = verify_condition_star(&l, &[]).unwrap();
    assert!(empty.passed() && empty.pairs == 0);
}

#[test]
fn fast_relations_agree_with_exact() {
    let l = lattice();
    let p = hyperbolic_place(&l).unwrap();
    let rs = roots(1);
    let mut counts = [0usize; 4];
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            counts[hyperplane_relation(&l, p, &rs[i], &rs[j]).unwrap() as usize] += 1;
        }
    }
    let rep = condition_star_report(&l, &rs).unwrap();
    assert_eq!(
        counts,
        [
            rep.relations.equal,
            rep.relations.orthogonal_intersecting,
            rep.relations.intersecting_nonorthogonal,
            rep.relations.disjoint_or_boundary
        ]
    );
}

#[test]
fn reflection_groups() {
    let l = lattice();
    let g = reflection_group(&l, &[e(0), e(1)]).unwrap();
    assert_eq!(g.order(), 100);
    assert!(g.verify());
    let g1 = reflection_group(&l, &[e(0)]).unwrap();
    assert_eq!(g1.order(), 10);
    assert!(g1.verify());
    let g0 = reflection_group(&l, &[]).unwrap();
    assert_eq!(g0.order(), 1);
    assert!(g0.elements[0].is_identity());
    // a non-orthogonal pair is rejected
    let rs = roots(1);
    let t = rs
        .iter()
        .find(|t| !l.form(e(0).vector(), t.vector()).is_zero())
        .unwrap();
    assert!(matches!(
        reflection_group(&l, &[e(0), t.clone()]),
        Err(ArrangementError::NotOrthogonal(0, 1))
    ));
    assert!(matches!(
        reflection_group(&l, &[e(0), e(0)]),
        Err(ArrangementError::Repeated(0, 1))
    ));
    assert!(matches!(
        reflection_group(&l, &[e(0), e(1), e(0)]),
        Err(ArrangementError::TooManyRoots(3))
    ));
}

#[test]
fn reflection_group_on_other_orthogonal_pair() {
    let l = lattice();
    let rs = roots(1);
    let (a, b) = rs
        .iter()
        .enumerate()
        .flat_map(|(i, a)| rs[i + 1..].iter().map(move |b| (a, b)))
        .find(|(a, b)| {
            l.form(a.vector(), b.vector()).is_zero()
                && a.vector()[2] != b.vector()[2]
                && !a.vector()[2].is_zero()
        })
        .unwrap();
    let g = reflection_group(&l, &[a.clone(), b.clone()]).unwrap();
    assert_eq!(g.order(), 100);
    assert!(g.verify());
    assert!(g
        .elements
        .iter()
        .all(|m| l.is_isometry(m) && m.is_integral()));
}

#[test]
fn fixed_locus() {
    let l = lattice();
    let f = l.field().clone();
    let e2 = unit_vector(&f, 3, 2);
    let rep = fixed_locus_check(&l, &[e(0), e(1)], &[1, 1], std::slice::from_ref(&e2)).unwrap();
    assert!(rep.consistent);
    assert!(rep.samples[0].fixed && rep.samples[0].on_hyperplanes && rep.samples[0].negative);
    let x = vec![f.one(), f.zero(), f.one()];
    let rep = fixed_locus_check(&l, &[e(0)], &[1], &[x]).unwrap();
    assert!(rep.consistent && !rep.samples[0].fixed && !rep.samples[0].on_hyperplanes);
    let rep = fixed_locus_check(&l, &[e(0), e(1)], &[0, 0], std::slice::from_ref(&e2)).unwrap();
    assert!(rep.consistent && rep.warning.is_some());
    // negative points off the mirror: (a, b, 2) has norm |a|² + |b|² − 4λ < 0 at the hyperbolic place
    let pts: Vec<Vec<CycElt>> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .map(|(a, b)| vec![f.from_int(a), f.from_int(b), f.from_int(2)])
        .collect();
    for exps in [[1, 0], [0, 3], [2, 5], [5, 5]] {
        let rep = fixed_locus_check(&l, &[e(0), e(1)], &exps, &pts).unwrap();
        assert!(rep.consistent, "{exps:?}");
        assert!(rep.samples.iter().any(|s| s.negative && s.fixed));
        assert!(rep.samples.iter().any(|s| s.negative && !s.fixed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_invariants(ri in 0usize..130, i in 0i64..10, j in 0i64..10) {
        let l = lattice();
        let rs = roots(1);
        let r = &rs[ri % rs.len()];
        let hi = reflection(&l, r, i);
        prop_assert!(l.is_isometry(&hi.matrix));
        prop_assert!(hi.matrix.is_integral());
        prop_assert!(hi.matrix.pow(hi.order).is_identity());
        let hj = reflection(&l, r, j);
        prop_assert_eq!(&hi.matrix * &hj.matrix, reflection(&l, r, i + j).matrix);
    }

    #[test]
    fn canonical_is_orbit_invariant(ri in 0usize..130, k in 0u32..10) {
        let rs = roots(1);
        let r = &rs[ri % rs.len()];
        let u = quintic::zeta10().pow(k);
        let ur = ShortRoot::new(&lattice(), r.vector().iter().map(|c| c * &u).collect()).unwrap();
        prop_assert_eq!(ur.canonical(), r.canonical());
    }

    #[test]
    fn relation_symmetry(a in 0usize..130, b in 0usize..130) {
        let l = lattice();
        let rs = roots(1);
        let (r, t) = (&rs[a % rs.len()], &rs[b % rs.len()]);
        let p = hyperbolic_place(&l).unwrap();
        prop_assert_eq!(hyperplane_relation(&l, p, r, t).unwrap(), hyperplane_relation(&l, p, t, r).unwrap());
        prop_assert_eq!(hyperplane_relation(&l, p, r, r).unwrap(), Relation::Equal);
        if l.form(r.vector(), t.vector()).is_zero() {
            let hr = reflection(&l, r, 1).matrix;
            let ht = reflection(&l, t, 1).matrix;
            prop_assert_eq!(&hr * &ht, &ht * &hr);
        }
    }
}

#[test]
fn classifier_detects_nonorthogonal_intersection() {
    // diag(1, 1, −1) is indefinite at both places, so the definite-place bound that
    // forces orthogonality is absent; t = (λ, 1, λ) meets e_0 at an angle
    let f = quintic::field();
    let one = f.one();
    let l =
        HermitianLattice::new(CycMatrix::diagonal(&f, &[one.clone(), one.clone(), -&one])).unwrap();
    assert_eq!(hyperbolic_place(&l), Err(ArrangementError::NotHyperbolic));
    let lam = elt(&[-1, 0, -1, -1]);
    let r = ShortRoot::new(&l, unit_vector(&f, 3, 0)).unwrap();
    let t = ShortRoot::new(&l, vec![lam.clone(), one.clone(), lam]).unwrap();
    assert_eq!(
        hyperplane_relation(&l, 0, &r, &t).unwrap(),
        Relation::IntersectingNonorthogonal
    );
}
