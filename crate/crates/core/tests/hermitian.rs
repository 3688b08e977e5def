use cm_glue_core::cyclotomic::{different_generator, quintic, CycElt, FieldDescriptor};
use cm_glue_core::f5;
use cm_glue_core::hermitian::{
    agree_discrepancy, hermitian_from_symplectic, is_unimodular, random_skew_hermitian,
    reduce_mod_theta, signature, signature_of_gram, skew_from_alternating,
    skew_from_alternating_averaged, skew_from_alternating_trace_dual, trace_form, AlternatingForm,
    HermitianError, HermitianLattice, SkewHermitianForm,
};
use cm_glue_core::matrix::CycMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_elt(rng: &mut ChaCha8Rng, field: &FieldDescriptor, bound: i64) -> CycElt {
    let c: Vec<i64> = (0..field.degree())
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    CycElt::from_ints(field, &c)
}

fn rand_hermitian(rng: &mut ChaCha8Rng, field: &FieldDescriptor, n: usize) -> CycMatrix {
    let mut h = CycMatrix::zero(field, n, n);
    for i in 0..n {
        let x = rand_elt(rng, field, 5);
        h[(i, i)] = &x + &x.conjugate();
        for j in i + 1..n {
            let a = rand_elt(rng, field, 5);
            h[(j, i)] = a.conjugate();
            h[(i, j)] = a;
        }
    }
    h
}

#[test]
fn quintic_std_signature() {
    let l = HermitianLattice::quintic_std();
    let sig = signature(&l).unwrap();
    assert_eq!(sig.pairs(), vec![(2, 1), (3, 0)]);
    let f = l.field();
    for e in &sig.entries {
        let c = f.conjugate_embedding(e.embedding);
        assert_eq!(sig.at_embedding(f, c), (e.s, e.r));
    }
}

#[test]
fn trivial_signatures() {
    let f = quintic::field();
    let id = HermitianLattice::identity(&f, 3);
    assert_eq!(signature(&id).unwrap().pairs(), vec![(3, 0), (3, 0)]);
    let neg = HermitianLattice::new(CycMatrix::diagonal(&f, &[f.from_int(-1)])).unwrap();
    assert_eq!(signature(&neg).unwrap().pairs(), vec![(0, 1), (0, 1)]);
}

#[test]
fn signature_with_zero_diagonal() {
    // hyperbolic plane [[0, 1], [1, 0]] and an imaginary off-diagonal entry
    let f = quintic::field();
    let h = CycMatrix::from_rows(vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]);
    assert_eq!(signature_of_gram(&h).unwrap().pairs(), vec![(1, 1), (1, 1)]);
    let t = quintic::theta();
    let h = CycMatrix::from_rows(vec![
        vec![f.zero(), t.clone()],
        vec![t.conjugate(), f.zero()],
    ]);
    assert_eq!(signature_of_gram(&h).unwrap().pairs(), vec![(1, 1), (1, 1)]);
}

#[test]
fn signature_matches_numeric_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = quintic::field();
    for _ in 0..20 {
        let h = rand_hermitian(&mut rng, &f, 3);
        if h.det().is_zero() {
            continue;
        }
        let sig = signature_of_gram(&h).unwrap();
        for e in &sig.entries {
            let m = nalgebra::DMatrix::from_fn(3, 3, |i, j| {
                let z = h[(i, j)].embed(e.embedding);
                nalgebra::Complex::new(z.re, z.im)
            });
            let eig = m.symmetric_eigenvalues();
            let pos = eig.iter().filter(|&&x| x > 0.0).count();
            assert_eq!((pos, 3 - pos), (e.r, e.s));
        }
    }
}

#[test]
fn unimodularity() {
    let f = quintic::field();
    assert!(is_unimodular(&HermitianLattice::quintic_std()));
    let g = CycMatrix::diagonal(&f, &[f.one(), f.one(), quintic::theta_norm().into_elt()]);
    assert!(!is_unimodular(&HermitianLattice::new(g).unwrap()));
    assert!(is_unimodular(&HermitianLattice::identity(&f, 1)));
    // oracle: λ is a unit since λ(λ + 1) = 1
    let lam = quintic::lambda();
    assert!((&lam * &(&lam + &f.one())).is_one());
    assert_eq!(lam.norm_q().abs(), BigRational::from_integer(1.into()));
    // |θ|² is not: its norm is 25
    assert_eq!(
        quintic::theta_norm().elt().norm_q(),
        BigRational::from_integer(25.into())
    );
}

#[test]
fn reduction_mod_theta() {
    let w = reduce_mod_theta(&HermitianLattice::quintic_std()).unwrap();
    assert_eq!(w.dim, 3);
    assert_eq!(w.gram, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 3]]);
    let f = quintic::field();
    let w = reduce_mod_theta(&HermitianLattice::identity(&f, 3)).unwrap();
    assert_eq!(w.gram, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let f3 = FieldDescriptor::cyclotomic(3).unwrap();
    assert!(matches!(
        reduce_mod_theta(&HermitianLattice::identity(&f3, 2)),
        Err(HermitianError::WrongField(_))
    ));
}

#[test]
fn reduction_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let l = HermitianLattice::quintic_std();
    let f = l.field().clone();
    let base = reduce_mod_theta(&l).unwrap();
    let base_class = f5::is_square(base.det());
    for _ in 0..20 {
        // a random product of elementary matrices and a torsion-unit scaling
        let mut g = CycMatrix::identity(&f, 3);
        for _ in 0..4 {
            let (i, j) = (rng.random_range(0..3), rng.random_range(0..3));
            if i == j {
                continue;
            }
            let mut e = CycMatrix::identity(&f, 3);
            e[(i, j)] = rand_elt(&mut rng, &f, 2);
            g = &g * &e;
        }
        let mut u = CycMatrix::identity(&f, 3);
        u[(0, 0)] = f.gen_pow(rng.random_range(0..5));
        let g = &g * &u;
        let gram = &(&g * l.gram()) * &g.adjoint();
        let w = reduce_mod_theta(&HermitianLattice::new(gram).unwrap()).unwrap();
        assert_eq!(w.dim, 3);
        assert_eq!(f5::is_square(w.det()), base_class);
        assert_ne!(w.det(), 0);
    }
}

#[test]
fn trace_form_rank_one() {
    let f = quintic::field();
    let xi = quintic::eta().inverse().unwrap();
    let t = SkewHermitianForm::new(CycMatrix::diagonal(&f, std::slice::from_ref(&xi))).unwrap();
    let e = trace_form(&t);
    assert!(e.is_integral());
    // oracle: Tr(ξ ζ^{j − j'}) summed over embeddings in floating point
    for j in 0..4 {
        for jp in 0..4 {
            let x = &xi * &f.gen_pow(j as i64 - jp as i64);
            let s: f64 = x.embeddings().iter().map(|z| z.re).sum();
            assert_eq!(e.matrix()[j][jp].to_f64().unwrap(), s.round());
            assert!((s - s.round()).abs() < 1e-9);
        }
    }
    let zero = SkewHermitianForm::new(CycMatrix::zero(&f, 2, 2)).unwrap();
    assert!(trace_form(&zero).is_zero());
}

#[test]
fn correspondence_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields = [
        quintic::field(),
        FieldDescriptor::cyclotomic(3).unwrap(),
        FieldDescriptor::cyclotomic(8).unwrap(),
        FieldDescriptor::imaginary_quadratic(-7).unwrap(),
    ];
    for k in 0..50 {
        let f = &fields[k % fields.len()];
        let n = 1 + k % 3;
        let t = random_skew_hermitian(&mut rng, f, n, 5);
        let e = trace_form(&t);
        let back = skew_from_alternating(&e).unwrap();
        assert_eq!(back, t);
        assert_eq!(trace_form(&back), e);
        assert_eq!(skew_from_alternating_trace_dual(&e).unwrap(), t);
    }
}

#[test]
fn averaging_and_trace_dual_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [3u32, 5, 7] {
        let f = FieldDescriptor::cyclotomic(p).unwrap();
        for n in 1..=2 {
            let t = random_skew_hermitian(&mut rng, &f, n, 5);
            let e = trace_form(&t);
            assert_eq!(
                skew_from_alternating_averaged(&e).unwrap(),
                skew_from_alternating_trace_dual(&e).unwrap()
            );
        }
    }
    let f8 = FieldDescriptor::cyclotomic(8).unwrap();
    let e = trace_form(&random_skew_hermitian(&mut rng, &f8, 1, 5));
    assert!(skew_from_alternating_averaged(&e).is_err());
}

#[test]
fn integrality_correspondence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = quintic::field();
    let xi = quintic::eta().inverse().unwrap();
    for _ in 0..10 {
        // T = ξ H is 𝔇^{-1}-valued; E is integral and ηT recovers H
        let h = rand_hermitian(&mut rng, &f, 2);
        let t = SkewHermitianForm::new(h.scale(&xi)).unwrap();
        let e = trace_form(&t);
        assert!(e.is_integral());
        let back = skew_from_alternating(&e).unwrap();
        assert!(back.is_inverse_different_valued().unwrap());
        // a random integral E built from an integral T is integral too
        let e2 = trace_form(&random_skew_hermitian(&mut rng, &f, 2, 5));
        assert!(e2.is_integral());
        assert!(skew_from_alternating(&e2)
            .unwrap()
            .is_inverse_different_valued()
            .unwrap());
    }
    // ξ/5 · identity is not 𝔇^{-1}-valued and its trace form is not integral
    let t = SkewHermitianForm::new(CycMatrix::diagonal(
        &f,
        &[xi.scale(&BigRational::new(1.into(), 5.into()))],
    ))
    .unwrap();
    assert!(!t.is_inverse_different_valued().unwrap());
    assert!(!trace_form(&t).is_integral());
}

#[test]
fn shimura_lattice_from_symplectic() {
    let std = HermitianLattice::quintic_std();
    let eta = quintic::eta();
    let xi = eta.inverse().unwrap();
    let t = SkewHermitianForm::new(std.gram().scale(&xi)).unwrap();
    let e = trace_form(&t);
    assert!(e.is_integral());
    assert_eq!(hermitian_from_symplectic(&e, &eta).unwrap(), std);
    // η times a non-real torsion unit is not purely imaginary
    let bad = &eta * &quintic::zeta10();
    assert_eq!(
        hermitian_from_symplectic(&e, &bad),
        Err(HermitianError::NotPurelyImaginary)
    );
    let f = quintic::field();
    let zero =
        AlternatingForm::new(&f, vec![vec![BigRational::from_integer(0.into()); 4]; 4]).unwrap();
    assert_eq!(
        hermitian_from_symplectic(&zero, &eta),
        Err(HermitianError::Degenerate)
    );
}

#[test]
fn symplectic_rejections() {
    let f = quintic::field();
    // the standard symplectic form on Z^4 is not ζ-compatible
    let j: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 0],
        vec![-1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, -1, 0],
    ];
    let e = AlternatingForm::from_ints(&f, &j).unwrap();
    assert!(matches!(
        skew_from_alternating(&e),
        Err(HermitianError::Incompatible(_, _))
    ));
    // Z^2 is not a Z[ζ_5]-module of this shape
    let j2: Vec<Vec<i64>> = vec![vec![0, 1], vec![-1, 0]];
    assert!(matches!(
        AlternatingForm::from_ints(&f, &j2),
        Err(HermitianError::ShapeMismatch { .. })
    ));
    let sym: Vec<Vec<i64>> = vec![vec![1, 0, 0, 0], vec![0; 4], vec![0; 4], vec![0; 4]];
    assert!(matches!(
        AlternatingForm::from_ints(&f, &sym),
        Err(HermitianError::NotAlternating(0, 0))
    ));
}

#[test]
fn numeric_eigenspace_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = quintic::field();
    for k in 0..20 {
        let n = 1 + k % 3;
        let t = random_skew_hermitian(&mut rng, &f, n, 5);
        let dim = n * f.degree();
        let x: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let y: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        assert!(agree_discrepancy(&t, &x, &y) < 1e-8);
    }
}

#[test]
fn other_fields_signatures() {
    for kind in [
        "identity:2@cyclotomic:3",
        "identity:2@quadratic:-7",
        "identity:1@cyclotomic:12",
    ] {
        let l = HermitianLattice::preset(kind).unwrap();
        let sig = signature(&l).unwrap();
        assert!(sig.pairs().iter().all(|&p| p == (l.rank(), 0)));
    }
    let f = different_generator(&quintic::field()).unwrap();
    assert!(!f.is_real());
}

#[test]
fn json_shape() {
    let v = serde_json::to_value(HermitianLattice::quintic_std()).unwrap();
    assert_eq!(v["rank"], 3);
    assert_eq!(v["field"]["n"], 5);
    assert_eq!(
        v["gram"][2][2]["coeffs"],
        serde_json::json!(["1", "0", "1", "1"])
    );
    let back: HermitianLattice = serde_json::from_value(v).unwrap();
    assert_eq!(back, HermitianLattice::quintic_std());
}
