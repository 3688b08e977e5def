use std::f64::consts::PI;

use cm_glue_core::hyperbolic::*;
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cocompact arithmetic triangle groups, as tabulated by Takeuchi.
const ARITHMETIC: [[u32; 3]; 76] = [
    [2, 3, 7],
    [2, 3, 8],
    [2, 3, 9],
    [2, 3, 10],
    [2, 3, 11],
    [2, 3, 12],
    [2, 3, 14],
    [2, 3, 16],
    [2, 3, 18],
    [2, 3, 24],
    [2, 3, 30],
    [2, 4, 5],
    [2, 4, 6],
    [2, 4, 7],
    [2, 4, 8],
    [2, 4, 10],
    [2, 4, 12],
    [2, 4, 18],
    [2, 5, 5],
    [2, 5, 6],
    [2, 5, 8],
    [2, 5, 10],
    [2, 5, 20],
    [2, 5, 30],
    [2, 6, 6],
    [2, 6, 8],
    [2, 6, 12],
    [2, 7, 7],
    [2, 7, 14],
    [2, 8, 8],
    [2, 8, 16],
    [2, 9, 18],
    [2, 10, 10],
    [2, 12, 12],
    [2, 12, 24],
    [2, 15, 30],
    [2, 18, 18],
    [3, 3, 4],
    [3, 3, 5],
    [3, 3, 6],
    [3, 3, 7],
    [3, 3, 8],
    [3, 3, 9],
    [3, 3, 12],
    [3, 3, 15],
    [3, 4, 4],
    [3, 4, 6],
    [3, 4, 12],
    [3, 5, 5],
    [3, 6, 6],
    [3, 6, 18],
    [3, 8, 8],
    [3, 8, 24],
    [3, 10, 30],
    [3, 12, 12],
    [4, 4, 4],
    [4, 4, 5],
    [4, 4, 6],
    [4, 4, 9],
    [4, 5, 5],
    [4, 6, 6],
    [4, 8, 8],
    [4, 16, 16],
    [5, 5, 5],
    [5, 5, 10],
    [5, 5, 15],
    [5, 10, 10],
    [6, 6, 6],
    [6, 12, 12],
    [6, 24, 24],
    [7, 7, 7],
    [8, 8, 8],
    [9, 9, 9],
    [9, 18, 18],
    [12, 12, 12],
    [15, 15, 15],
];

fn dist(a: Complex64, b: Complex64) -> f64 {
    (1.0 + (a - b).norm_sqr() / (2.0 * a.im * b.im)).acosh()
}

/// Interior angles from the hyperbolic law of cosines.
fn law_of_cosines_angles(v: &[Complex64; 3]) -> [f64; 3] {
    let [v12, v13, v23] = *v;
    let angle = |at: Complex64, u: Complex64, w: Complex64| {
        let (b, c, a) = (dist(at, u), dist(at, w), dist(u, w));
        ((b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh())).acos()
    };
    [
        angle(v12, v13, v23),
        angle(v13, v12, v23),
        angle(v23, v12, v13),
    ]
}

/// `∮ dx/y` over the boundary: vertical sides contribute nothing, a circle arc from
/// polar angle `t₀` to `t₁` contributes `t₀ − t₁`.
fn green_area(spec: &TriangleGroupSpec) -> f64 {
    let [v12, v13, v23] = spec.vertices;
    // boundary V₁₂ → V₁₃ (L₁) → V₂₃ (L₃) → V₁₂ (L₂)
    let legs = [
        (spec.sides[0], v12, v13),
        (spec.sides[2], v13, v23),
        (spec.sides[1], v23, v12),
    ];
    let signed: f64 = legs
        .iter()
        .map(|(l, a, b)| match l {
            GeodesicLine::Vertical { .. } => 0.0,
            GeodesicLine::Circle { c, .. } => (a - c).arg() - (b - c).arg(),
        })
        .sum();
    signed.abs()
}

#[test]
fn triangle_3_5_10() {
    let t = build_triangle(3, 5, 10).unwrap();
    assert_eq!(t.vertices[0], Complex64::i());
    assert_eq!(t.sides[0], GeodesicLine::Vertical { c: 0.0 });
    let want = [PI / 3.0, PI / 5.0, PI / 10.0];
    for (m, w) in interior_angles(&t.sides, &t.vertices).iter().zip(want) {
        assert!((m - w).abs() <= ANGLE_TOL, "{m} vs {w}");
    }
    for (m, w) in law_of_cosines_angles(&t.vertices).iter().zip(want) {
        assert!((m - w).abs() <= 1e-10, "{m} vs {w}");
    }
    for (k, &(i, j)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
        assert!(t.sides[i].residual(t.vertices[k]).abs() < 1e-12);
        assert!(t.sides[j].residual(t.vertices[k]).abs() < 1e-12);
    }
    assert!(t.vertices.iter().all(|v| v.im > 0.0));
    assert_eq!(build_triangle(3, 5, 10).unwrap(), t);
}

#[test]
fn degenerate_orders_are_rejected() {
    assert!(matches!(
        build_triangle(2, 3, 6),
        Err(HyperbolicError::NotHyperbolic(_))
    ));
    assert!(matches!(
        build_triangle(2, 4, 4),
        Err(HyperbolicError::NotHyperbolic(_))
    ));
    assert!(matches!(
        build_triangle(2, 2, 50),
        Err(HyperbolicError::NotHyperbolic(_))
    ));
    assert!(matches!(
        build_triangle(1, 5, 10),
        Err(HyperbolicError::BadOrder(_))
    ));
    assert!(build_triangle(2, 3, 7).is_ok());
    assert!(!is_hyperbolic([3, 3, 3]) && is_hyperbolic([3, 3, 4]));
}

#[test]
fn presentations() {
    for orders in [[3, 5, 10], [2, 3, 7], [4, 4, 5], [2, 20, 21]] {
        let t = build_triangle(orders[0], orders[1], orders[2]).unwrap();
        let rep = presentation_report(&t, RELATION_TOL);
        assert!(rep.pass, "{orders:?}: {rep:?}");
        assert!(verify_presentation(&t, RELATION_TOL));
    }
}

#[test]
fn perturbed_triangle_fails() {
    let mut t = triangle_with_angles([PI / 3.0 + 1e-3, PI / 5.0, PI / 10.0]).unwrap();
    t.orders = [3, 5, 10];
    assert!(!verify_presentation(&t, RELATION_TOL));
    let rep = presentation_report(&t, RELATION_TOL);
    assert!(rep.relation_errors[0] > 1e-4);
    assert!(rep.relation_errors[1] <= RELATION_TOL);
}

#[test]
fn reflections_fix_their_sides() {
    let t = build_triangle(3, 5, 10).unwrap();
    for (k, &(i, j)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
        let v = t.vertices[k];
        assert!((t.reflections[i].apply(v) - v).norm() < 1e-12);
        assert!((t.reflections[j].apply(v) - v).norm() < 1e-12);
    }
    for r in &t.reflections {
        assert!(r.reverses_orientation());
        // isometry: distances between the vertices are preserved
        let img = t.vertices.map(|v| r.apply(v));
        for a in 0..3 {
            for b in 0..3 {
                assert!((dist(img[a], img[b]) - dist(t.vertices[a], t.vertices[b])).abs() < 1e-10);
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            assert!(!t.reflections[i]
                .compose(&t.reflections[j])
                .reverses_orientation());
        }
    }
}

#[test]
fn areas() {
    let t = build_triangle(3, 5, 10).unwrap();
    assert!((area(&t) - 11.0 * PI / 30.0).abs() <= 1e-9);
    assert!((area_numeric_adaptive(&t, 1e-8) - 11.0 * PI / 30.0).abs() <= 1e-6);
    assert!((green_area(&t) - 11.0 * PI / 30.0).abs() <= 1e-9);
    let t = build_triangle(2, 3, 7).unwrap();
    assert!((area(&t) - PI / 42.0).abs() <= 1e-12);
    assert!((area_numeric_adaptive(&t, 1e-8) - PI / 42.0).abs() <= 1e-6);
}

#[test]
fn random_areas_match_integration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    while done < 10 {
        let mut o = [
            rng.random_range(2..12u32),
            rng.random_range(2..12u32),
            rng.random_range(2..12u32),
        ];
        o.sort();
        if !is_hyperbolic(o) {
            continue;
        }
        let t = build_triangle(o[0], o[1], o[2]).unwrap();
        let a = area(&t);
        assert!(a > 0.0);
        assert!((area_numeric_adaptive(&t, 1e-8) - a).abs() <= 1e-6, "{o:?}");
        assert!((green_area(&t) - a).abs() <= 1e-9, "{o:?}");
        done += 1;
    }
}

#[test]
fn takeuchi_examples() {
    let r = takeuchi_is_arithmetic(3, 5, 10).unwrap();
    assert!(!r.arithmetic);
    assert_eq!(r.verdict(), "non_arithmetic");
    assert!(r.value_at_identity > 0.0);
    assert!(r.other_embeddings.iter().any(|e| e.value > 0.0));
    let r = takeuchi_is_arithmetic(2, 3, 7).unwrap();
    assert!(r.arithmetic);
    assert_eq!(r.trace_field_degree, 3);
    let r = takeuchi_is_arithmetic(5, 5, 5).unwrap();
    assert!(r.arithmetic);
    assert_eq!(r.trace_field_degree, 2);
    assert!(takeuchi_is_arithmetic(2, 3, 6).is_err());
}

#[test]
fn published_arithmetic_list() {
    let mut found = Vec::new();
    for p in 2..=40u32 {
        for q in p..=40 {
            for r in q..=40 {
                if takeuchi_is_arithmetic_fast(p, q, r) == Some(true) {
                    found.push([p, q, r]);
                }
            }
        }
    }
    assert_eq!(found, ARITHMETIC.to_vec());
}

#[test]
fn exact_and_fast_criteria_agree() {
    for o in ARITHMETIC {
        assert!(
            takeuchi_is_arithmetic(o[0], o[1], o[2]).unwrap().arithmetic,
            "{o:?}"
        );
    }
    for p in 2..=8u32 {
        for q in p..=12 {
            for r in q..=16 {
                // keep the ambient cyclotomic field small for exact arithmetic
                if !is_hyperbolic([p, q, r]) || p.lcm(&q).lcm(&r) > 60 {
                    continue;
                }
                let exact = takeuchi_is_arithmetic(p, q, r).unwrap().arithmetic;
                assert_eq!(
                    Some(exact),
                    takeuchi_is_arithmetic_fast(p, q, r),
                    "{p} {q} {r}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn takeuchi_is_symmetric(p in 2u32..13, q in 2u32..13, r in 2u32..13) {
        prop_assume!(is_hyperbolic([p, q, r]) && p.lcm(&q).lcm(&r) <= 60);
        let base = takeuchi_is_arithmetic(p, q, r).unwrap().arithmetic;
        for o in [[q, p, r], [r, q, p], [p, r, q], [q, r, p], [r, p, q]] {
            prop_assert_eq!(takeuchi_is_arithmetic(o[0], o[1], o[2]).unwrap().arithmetic, base);
        }
    }

    #[test]
    fn constructed_angles_are_exact(p in 2u32..20, q in 2u32..20, r in 2u32..20) {
        prop_assume!(is_hyperbolic([p, q, r]));
        let t = build_triangle(p, q, r).unwrap();
        let want = [p, q, r].map(|n| PI / n as f64);
        for (m, w) in law_of_cosines_angles(&t.vertices).iter().zip(want) {
            prop_assert!((m - w).abs() <= 1e-9);
        }
        prop_assert!(verify_presentation(&t, RELATION_TOL));
    }
}
