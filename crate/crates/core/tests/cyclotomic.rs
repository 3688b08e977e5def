use cm_glue_core::cyclotomic::{
    self, different_generator, discriminant, quintic, torsion_unit_group, CycElt, FieldDescriptor,
    RealElt,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;
use std::cmp::Ordering;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sample_fields() -> Vec<FieldDescriptor> {
    let mut out: Vec<_> = [3u32, 4, 5, 7, 8, 9, 12, 15, 16]
        .iter()
        .map(|&n| FieldDescriptor::cyclotomic(n).unwrap())
        .collect();
    out.extend(
        [-3i64, -4, -7, -8, -15, -20, -23]
            .iter()
            .map(|&d| FieldDescriptor::imaginary_quadratic(d).unwrap()),
    );
    out
}

/// Independent resultant oracle: det of the Sylvester matrix of f and f'.
fn resultant_disc(f: &[i64]) -> i128 {
    let n = f.len() - 1;
    let df: Vec<i64> = (1..=n).map(|i| f[i] * i as i64).collect();
    let size = 2 * n - 1;
    let mut m = vec![vec![0i128; size]; size];
    // rows of f (n-1 shifts), rows of f' (n shifts); highest degree first
    for r in 0..n - 1 {
        for (k, &c) in f.iter().rev().enumerate() {
            m[r][r + k] = c as i128;
        }
    }
    for r in 0..n {
        for (k, &c) in df.iter().rev().enumerate() {
            m[n - 1 + r][r + k] = c as i128;
        }
    }
    // fraction-free elimination
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size - 1 {
        if m[k][k] == 0 {
            let p = (k + 1..size).find(|&r| m[r][k] != 0).expect("singular");
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[size - 1][size - 1]
}

#[test]
fn conjugation_examples() {
    let z = quintic::zeta5();
    assert_eq!(z.conjugate(), z.pow(4));
    assert_eq!(quintic::lambda().conjugate(), quintic::lambda());
    assert_eq!(quintic::theta().conjugate(), -quintic::theta());
}

#[test]
fn traces_match_multiplication_matrix() {
    let f = quintic::field();
    assert_eq!(f.one().trace_q(), q(4));
    assert_eq!(quintic::zeta5().trace_q(), q(-1));
    assert_eq!(quintic::lambda().trace_q(), q(-2));
    assert_eq!(RealElt::new(quintic::lambda()).unwrap().trace_to_q(), q(-1));
    for field in sample_fields() {
        let d = field.degree() as i64;
        let x = CycElt::from_ints(
            &field,
            &(0..d).map(|i| 3 * i - 2 + i * i).collect::<Vec<_>>(),
        );
        let m = x.multiplication_matrix();
        let tr: BigRational = (0..m.len()).map(|i| m[i][i].clone()).sum();
        assert_eq!(tr, x.trace_q(), "{field:?}");
    }
}

#[test]
fn embedding_examples() {
    let f = quintic::field();
    // index 0 is k = 1
    let z = quintic::zeta5().embed(0);
    let expect = num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU / 5.0);
    assert!((z - expect).norm() < 1e-15);
    let lam = quintic::lambda().embed(0);
    assert!((lam.re - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14 && lam.im.abs() < 1e-14);
    // (1 − √5)/2 = −λ; at k = 2 the sign of √5 flips
    let x = -quintic::lambda();
    let v = x.embed(1);
    assert!((v.re - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    assert_eq!(f.embedding_unit(1), Some(2));
}

#[test]
fn quintic_discriminant_is_125() {
    let f = quintic::field();
    assert_eq!(discriminant(&f), BigInt::from(125));
    assert_eq!(resultant_disc(f.minimal_polynomial()).abs(), 125);
}

#[test]
fn discriminants_agree_with_resultants() {
    for field in sample_fields() {
        let d = discriminant(&field);
        let r = resultant_disc(field.minimal_polynomial());
        assert_eq!(d.abs().to_i128().unwrap(), r.abs(), "{field:?}");
    }
}

#[test]
fn different_generator_examples() {
    let f = FieldDescriptor::imaginary_quadratic(-4).unwrap();
    let eta = different_generator(&f).unwrap();
    // 2i: ω = i in this basis
    assert_eq!(eta, CycElt::from_ints(&f, &[0, 2]));
    let f = quintic::field();
    let expect = quintic::theta().inverse().unwrap().scale_int(5);
    assert_eq!(different_generator(&f).unwrap(), expect);
    assert!(expect.is_integral());
}

#[test]
fn different_generators_generate_the_different() {
    for field in sample_fields() {
        let eta = different_generator(&field).unwrap();
        assert_eq!(eta.conjugate(), -eta.clone(), "{field:?}");
        assert!(eta.is_integral());
        let inv = eta.inverse().unwrap();
        // η^{-1} O_K lies in the trace dual
        for j in 0..field.degree() {
            let mut c = vec![0i64; field.degree()];
            c[j] = 1;
            let b = CycElt::from_ints(&field, &c);
            assert!((&inv * &b).trace_q().is_integer(), "{field:?} basis {j}");
        }
        // and has the right index
        let norm = eta.norm_q().abs();
        assert_eq!(
            norm,
            BigRational::from_integer(discriminant(&field).abs()),
            "{field:?}"
        );
    }
}

#[test]
fn cm_type_is_a_cm_type() {
    for field in sample_fields() {
        let psi = field.cm_type().to_vec();
        assert_eq!(psi.len(), field.degree() / 2);
        let eta = different_generator(&field).unwrap();
        let mut all: Vec<usize> = psi
            .iter()
            .flat_map(|&i| [i, field.conjugate_embedding(i)])
            .collect();
        all.sort();
        assert_eq!(all, (0..field.degree()).collect::<Vec<_>>());
        for &i in &psi {
            assert!(eta.embed(i).im > 0.0);
        }
    }
    // Q(ζ_5): Ψ = {k = 4, k = 3}, ordered by real place
    let f = quintic::field();
    let units: Vec<u32> = f
        .cm_type()
        .iter()
        .map(|&i| f.embedding_unit(i).unwrap())
        .collect();
    assert_eq!(units, vec![4, 3]);
}

#[test]
fn torsion_examples() {
    let (m, g) = torsion_unit_group(&quintic::field());
    assert_eq!(m, 10);
    assert_eq!(g, -quintic::zeta5());
    let f4 = FieldDescriptor::cyclotomic(4).unwrap();
    assert_eq!(torsion_unit_group(&f4), (4, f4.gen()));
    let f7 = FieldDescriptor::imaginary_quadratic(-7).unwrap();
    assert_eq!(torsion_unit_group(&f7), (2, f7.from_int(-1)));
}

fn primes_dividing(m: u32) -> Vec<u32> {
    (2..=m)
        .filter(|p| m.is_multiple_of(*p) && (2..*p).all(|d| p % d != 0))
        .collect()
}

#[test]
fn torsion_generators_are_primitive() {
    for field in sample_fields() {
        let (m, g) = torsion_unit_group(&field);
        assert!(g.pow(m).is_one(), "{field:?}");
        for p in primes_dividing(m) {
            assert!(!g.pow(m / p).is_one(), "{field:?}");
        }
        assert!((&g * &g.conjugate()).is_one());
    }
}

#[test]
fn quintic_torsion_by_enumeration() {
    // every root of unity in Q(ζ_5) is ±ζ^j; count those of each order
    let z = quintic::zeta5();
    let mut orders = Vec::new();
    for sign in [1i64, -1] {
        for j in 0..5 {
            let u = z.pow(j).scale_int(sign);
            let ord = (1..=20).find(|&k| u.pow(k).is_one()).unwrap();
            orders.push(ord);
        }
    }
    assert_eq!(*orders.iter().max().unwrap(), 10);
    assert_eq!(orders.iter().filter(|&&o| o == 10).count(), 4);
}

#[test]
fn quadratic_torsion_by_unit_norms() {
    // units of norm 1 in O_K for Δ = −7: find all (a, b) with N(a + bω) = 1 in a box
    let f = FieldDescriptor::imaginary_quadratic(-7).unwrap();
    let mut count = 0;
    for a in -5..=5 {
        for b in -5..=5 {
            if CycElt::from_ints(&f, &[a, b]).norm_q().is_one() {
                count += 1;
            }
        }
    }
    assert_eq!(count, 2);
}

#[test]
fn real_signs_in_quintic_field() {
    let f = quintic::field();
    let lam = RealElt::new(quintic::lambda()).unwrap();
    assert_eq!(
        lam.signs().unwrap(),
        vec![Ordering::Greater, Ordering::Less]
    );
    let t = quintic::theta_norm();
    assert!(t.is_totally_positive().unwrap());
    assert!((t.value_at(0) - (5.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert!(RealElt::new(quintic::zeta5()).is_err());
    // λ² + λ − 1 = 0 exactly
    let l = quintic::lambda();
    assert!((&(&l * &l) + &l - f.one()).is_zero());
    // golden round trip
    let x = RealElt::from_golden(q(7), q(-3));
    assert_eq!(x.golden().unwrap(), (q(7), q(-3)));
    assert_eq!(x.sign_at(0).unwrap(), Ordering::Greater);
    assert_eq!(x.sign_at(1).unwrap(), Ordering::Greater);
}

#[test]
fn certified_signs_in_larger_fields() {
    let f = FieldDescriptor::cyclotomic(7).unwrap();
    let z = f.gen();
    let a = &z + &z.conjugate();
    let ra = RealElt::new(a.clone()).unwrap();
    for p in 0..3 {
        let expect = if ra.value_at(p) > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        assert_eq!(ra.sign_at(p).unwrap(), expect);
    }
    // a tiny but nonzero unit-free combination still decides
    let x = RealElt::new(&(&a * &a) - &f.from_int(2)).unwrap();
    assert!(x.signs().is_ok());
}

#[test]
fn json_roundtrip() {
    let eta = quintic::eta();
    let s = serde_json::to_string(&eta).unwrap();
    assert!(s.contains("\"kind\":\"cyclotomic\""));
    let back: CycElt = serde_json::from_str(&s).unwrap();
    assert_eq!(back, eta);
    let half = quintic::field()
        .one()
        .scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let s = serde_json::to_string(&half).unwrap();
    assert!(s.contains("\"1/2\""));
    assert_eq!(serde_json::from_str::<CycElt>(&s).unwrap(), half);
}

#[test]
fn field_kind_parsing() {
    let k: cyclotomic::FieldKind = "cyclotomic:5".parse().unwrap();
    assert_eq!(k, cyclotomic::FieldKind::Cyclotomic { n: 5 });
    let k: cyclotomic::FieldKind = "quadratic:-7".parse().unwrap();
    assert_eq!(k, cyclotomic::FieldKind::ImaginaryQuadratic { disc: -7 });
    assert!("nonsense".parse::<cyclotomic::FieldKind>().is_err());
}

fn elt_strategy(field: FieldDescriptor) -> impl Strategy<Value = CycElt> {
    let d = field.degree();
    prop::collection::vec(-50i64..=50, d).prop_map(move |c| CycElt::from_ints(&field, &c))
}

fn any_field() -> impl Strategy<Value = FieldDescriptor> {
    prop::sample::select(sample_fields())
}

proptest! {
    #[test]
    fn conjugation_is_a_ring_involution((x, y) in any_field().prop_flat_map(|f| (elt_strategy(f.clone()), elt_strategy(f)))) {
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!(x.trace_q(), x.conjugate().trace_q());
    }

    #[test]
    fn embeddings_sum_to_trace(x in any_field().prop_flat_map(elt_strategy)) {
        let s: num_complex::Complex64 = x.embeddings().into_iter().sum();
        let t = x.trace_q().to_f64().unwrap();
        prop_assert!((s.re - t).abs() < 1e-9 && s.im.abs() < 1e-9);
    }

    #[test]
    fn embeddings_are_multiplicative(
        (x, y) in any_field().prop_flat_map(|f| {
            let d = f.degree();
            let g = f.clone();
            (
                prop::collection::vec(-(1i64 << 40)..(1i64 << 40), d).prop_map(move |c| CycElt::from_ints(&f, &c)),
                prop::collection::vec(-(1i64 << 40)..(1i64 << 40), d).prop_map(move |c| CycElt::from_ints(&g, &c)),
            )
        })
    ) {
        let xy = &x * &y;
        for idx in 0..x.field().degree() {
            let lhs = x.embed(idx) * y.embed(idx);
            let rhs = xy.embed(idx);
            let scale = x.coeffs().iter().map(|c| c.abs().to_f64().unwrap()).sum::<f64>()
                * y.coeffs().iter().map(|c| c.abs().to_f64().unwrap()).sum::<f64>();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn multiplication_is_associative((a, b, c) in any_field().prop_flat_map(|f| (elt_strategy(f.clone()), elt_strategy(f.clone()), elt_strategy(f)))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn inverse_is_inverse(x in any_field().prop_flat_map(elt_strategy)) {
        prop_assume!(!x.is_zero());
        let inv = x.inverse().unwrap();
        prop_assert!((&x * &inv).is_one());
        prop_assert_eq!(x.norm_q(), x.conjugate().norm_q());
    }

    #[test]
    fn golden_signs_match_floats(u in -200i64..200, v in -200i64..200) {
        let x = RealElt::from_golden(q(u), q(v));
        for p in 0..2 {
            let s = x.sign_at(p).unwrap();
            let f = x.value_at(p);
            if (u, v) == (0, 0) {
                prop_assert_eq!(s, Ordering::Equal);
            } else {
                prop_assert_eq!(s, if f > 0.0 { Ordering::Greater } else { Ordering::Less });
            }
        }
        prop_assert!(x.elt().is_real());
    }
}
