//! The verification suite behind `verify-all`. Every check is deterministic for a
//! fixed seed and reports no timings.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use cm_glue_core::arrangement::{
    condition_star_report, enumerate_short_roots, reflection, reflection_group, ShortRoot,
};
use cm_glue_core::cyclotomic::{different_generator, discriminant, quintic, FieldDescriptor};
use cm_glue_core::gluing::{
    components_mod_bf, equivalence_relation_bruteforce, involutions_at_center, random_t,
    sample_rng, tg_orbit_representatives, tg_representative, LocalModel,
};
use cm_glue_core::golden::ZLambda;
use cm_glue_core::hermitian::{
    agree_discrepancy, random_skew_hermitian, signature, skew_from_alternating,
    skew_from_alternating_trace_dual, trace_form, HermitianLattice,
};
use cm_glue_core::hyperbolic::{
    area, area_numeric_adaptive, build_triangle, interior_angles, presentation_report,
    takeuchi_is_arithmetic, ANGLE_TOL, RELATION_TOL,
};
use cm_glue_core::involutions::{
    classification_stability, classify, fixed_lattice, match_diagonal_form, reference_forms,
    reference_involutions, saturation_holds, scaled_fixed, FormMatch,
};
use cm_glue_core::matrix::CycMatrix;
use cm_glue_core::quintic_moduli::{
    d3_normal_form, d5_normal_form, random_stable_configuration, stabilizer, GroupType, P1Point,
    RealConfiguration,
};
use num_complex::Complex64;
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{fmt_golden, CliError};
use crate::golden::GoldenValues;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

fn check(id: u32, name: &str, pass: bool, details: Value) -> Check {
    Check {
        id,
        name: name.into(),
        pass,
        details,
    }
}

/// Runs criterion `id` (1–11).
pub fn run_check(id: u32, bound: i64, seed: u64, golden: &GoldenValues) -> Result<Check, CliError> {
    match id {
        1 => signatures(),
        2 => involution_classes(seed),
        3 => fixed_forms(),
        4 => saturation(),
        5 => condition_star(bound, golden),
        6 => reflection_structure(),
        7 => local_models(),
        8 => tg_representatives(seed),
        9 => stabilizers(seed),
        10 => triangle(golden),
        11 => form_correspondences(seed, golden),
        _ => Err(CliError::Input(format!("no check {id}"))),
    }
}

pub fn run_all(bound: i64, seed: u64, golden: &GoldenValues) -> Result<Vec<Check>, CliError> {
    (1..=11)
        .map(|id| run_check(id, bound, seed, golden))
        .collect()
}

pub fn signatures() -> Result<Check, CliError> {
    let sig = signature(&HermitianLattice::quintic_std())?.pairs();
    Ok(check(
        1,
        "shimura_lattice_signature",
        sig == [(2, 1), (3, 0)],
        json!({"signature": sig}),
    ))
}

pub fn involution_classes(seed: u64) -> Result<Check, CliError> {
    let l = HermitianLattice::quintic_std();
    let refs = reference_involutions(&l)?;
    let mut classes = Vec::new();
    let mut consistent = true;
    for (j, a) in refs.iter().enumerate() {
        for x in [a.clone(), a.negate()] {
            let c = classify(&x)?;
            consistent &= c == j;
            classes.push(c);
        }
    }
    let distinct = classes.iter().collect::<BTreeSet<_>>().len();
    let suite = classification_stability(100, seed)?;
    Ok(check(
        2,
        "involution_classification",
        consistent && distinct == 3 && suite.passed(),
        json!({
            "reference_classes": classes,
            "distinct_classes": distinct,
            "random_trials": suite.trials,
            "random_stable": suite.stable,
        }),
    ))
}

pub fn fixed_forms() -> Result<Check, CliError> {
    let l = HermitianLattice::quintic_std();
    let refs = reference_involutions(&l)?;
    let forms = reference_forms();
    let mut matches = Vec::new();
    let mut pass = true;
    for (a, q) in refs.iter().zip(&forms) {
        let m = match_diagonal_form(&fixed_lattice(a)?, q)?;
        pass &= m != FormMatch::Different;
        matches.push(m);
    }
    let theta = ZLambda::from_real(&quintic::theta_norm());
    let theta_ok = theta == Some(ZLambda::new(3, 1));
    Ok(check(
        3,
        "fixed_forms",
        pass && theta_ok,
        json!({"form_match": matches, "theta_norm": theta.map(fmt_golden), "theta_norm_exact": theta_ok}),
    ))
}

pub fn saturation() -> Result<Check, CliError> {
    let l = HermitianLattice::quintic_std();
    let refs = reference_involutions(&l)?;
    let mut holds = Vec::new();
    for a in &refs {
        holds.push(saturation_holds(&l, &fixed_lattice(a)?));
    }
    let control = saturation_holds(&l, &scaled_fixed(&l, &fixed_lattice(&refs[0])?, 2));
    Ok(check(
        4,
        "saturation",
        holds.iter().all(|&h| h) && !control,
        json!({"holds": holds, "shrunken_control_holds": control}),
    ))
}

pub fn condition_star(bound: i64, golden: &GoldenValues) -> Result<Check, CliError> {
    let l = HermitianLattice::quintic_std();
    let rs = enumerate_short_roots(&l, bound)?;
    let rep = condition_star_report(&l, &rs)?;
    let expected = golden.short_roots("quintic-std", bound);
    let golden_ok = expected.is_none_or(|g| {
        g.count == rs.len() && g.orthogonal_intersecting == rep.relations.orthogonal_intersecting
    });
    Ok(check(
        5,
        "condition_star",
        rep.passed() && golden_ok,
        json!({
            "bound": bound,
            "count": rs.len(),
            "relations": rep.relations,
            "violations": rep.violations.len(),
            "golden_checked": expected.is_some(),
        }),
    ))
}

fn unit_root(l: &HermitianLattice, k: usize) -> Result<ShortRoot, CliError> {
    let f = l.field();
    let v = (0..l.rank())
        .map(|i| if i == k { f.one() } else { f.zero() })
        .collect();
    Ok(ShortRoot::new(l, v)?)
}

fn matrix_order(m: &CycMatrix, max: u32) -> Option<u32> {
    let mut p = m.clone();
    for k in 1..=max {
        if p.is_identity() {
            return Some(k);
        }
        p = &p * m;
    }
    None
}

pub fn reflection_structure() -> Result<Check, CliError> {
    let l = HermitianLattice::quintic_std();
    let (e0, e1) = (unit_root(&l, 0)?, unit_root(&l, 1)?);
    let h0 = reflection(&l, &e0, 1).matrix;
    let h1 = reflection(&l, &e1, 1).matrix;
    let order = matrix_order(&h0, 20);
    let isometry = l.is_isometry(&h0) && l.is_isometry(&h1);
    let g = reflection_group(&l, &[e0, e1])?;
    let commute = &h0 * &h1 == &h1 * &h0;
    Ok(check(
        6,
        "reflection_structure",
        order == Some(10) && g.order() == 100 && g.verify() && commute && isometry,
        json!({"reflection_order": order, "group_order": g.order(), "orthogonal_reflections_commute": commute}),
    ))
}

pub fn local_models() -> Result<Check, CliError> {
    let m = 10u32;
    let mut cases = Vec::new();
    let mut pass = true;
    for (a, b) in [(0usize, 0usize), (0, 1), (0, 2), (1, 0)] {
        let model = LocalModel::new(2, m, a, b)?;
        let invs = involutions_at_center(&model).len();
        let comps = components_mod_bf(&model);
        let eq = equivalence_relation_bruteforce(&model)?;
        let ok = invs == (m as usize).pow((a + b) as u32)
            && comps.copies == (m as usize).pow(a as u32)
            && eq.passed();
        // a = 1, b = 0: ten copies pairwise meeting in a point
        let point = a != 1 || b != 0 || comps.pairwise_intersection_dims.keys().eq([0].iter());
        pass &= ok && point;
        cases.push(json!({
            "a": a, "b": b,
            "involutions": invs,
            "components": comps.copies,
            "eqrel": eq.passed(),
            "labels": eq.labels,
        }));
    }
    Ok(check(
        7,
        "gluing_local_models",
        pass,
        json!({"n": 2, "m": m, "cases": cases}),
    ))
}

pub fn tg_representatives(seed: u64) -> Result<Check, CliError> {
    let mut pass = true;
    let mut rng = sample_rng(seed);
    let mut failures = 0usize;
    for m in [4u32, 6, 10] {
        let w = Complex64::from_polar(1.0, PI / (1u32 << m.trailing_zeros()) as f64);
        let z = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
        for _ in 0..1000 {
            let t = random_t(&mut rng, m);
            let rep = tg_representative(t, m)?;
            let shifted = tg_representative(t * z.powu(rng.random_range(0..m)), m)?;
            let again = tg_representative(w.powu(rep.0 as u32) * rep.1, m)?;
            let unique = rep.1 <= 1e-6 || {
                let reps = tg_orbit_representatives(t, m);
                reps.len() == 1 && reps[0].0 == rep.0
            };
            let ok = shifted.0 == rep.0
                && (shifted.1 - rep.1).abs() < 1e-9
                && again.0 == rep.0
                && (again.1 - rep.1).abs() < 1e-9
                && unique;
            if !ok {
                failures += 1;
            }
        }
    }
    pass &= failures == 0;
    let (eps, r) = tg_representative(Complex64::new(0.0, 3.0), 10)?;
    let example = eps == 1 && (r - 3.0).abs() < 1e-12;
    Ok(check(
        8,
        "tg_representatives",
        pass && example,
        json!({"samples_per_m": 1000, "failures": failures, "example_3i": [eps, r]}),
    ))
}

pub fn stabilizers(seed: u64) -> Result<Check, CliError> {
    let l = ZLambda::LAMBDA;
    let golden_identity = l * (l + ZLambda::ONE) == ZLambda::ONE;
    let c = |re: f64, im: f64| P1Point::finite(Complex64::new(re, im));
    let r = P1Point::real;
    let inf = P1Point::infinity();
    let named = [
        ("d5", d5_normal_form(), GroupType::D5),
        ("d3", d3_normal_form(), GroupType::D3),
        (
            "z2_nodes",
            RealConfiguration::new(&[inf, c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0)])?,
            GroupType::Z2,
        ),
        (
            "z2_real",
            RealConfiguration::new(&[r(-1.0), r(0.0), inf, r(2.0), r(0.5)])?,
            GroupType::Z2,
        ),
    ];
    let mut pass = golden_identity;
    let mut found = serde_json::Map::new();
    for (name, cfg, want) in &named {
        let g = stabilizer(cfg)?.group_type;
        pass &= g == *want;
        found.insert(name.to_string(), json!(g.name()));
    }
    let mut rng = sample_rng(seed);
    let mut seen = std::collections::BTreeMap::<String, usize>::new();
    let mut unexpected = 0usize;
    for _ in 0..500 {
        let g = stabilizer(&random_stable_configuration(&mut rng))?.group_type;
        unexpected += usize::from(!g.is_expected());
        *seen.entry(g.name()).or_default() += 1;
    }
    pass &= unexpected == 0;
    Ok(check(
        9,
        "stabilizers",
        pass,
        json!({"lambda_identity_exact": golden_identity, "normal_forms": found, "random_types": seen, "unexpected": unexpected}),
    ))
}

pub fn triangle(golden: &GoldenValues) -> Result<Check, CliError> {
    let t = build_triangle(3, 5, 10)?;
    let want = [PI / 3.0, PI / 5.0, PI / 10.0];
    let angle_err = interior_angles(&t.sides, &t.vertices)
        .iter()
        .zip(want)
        .map(|(m, w)| (m - w).abs())
        .fold(0.0, f64::max);
    let rep = presentation_report(&t, RELATION_TOL);
    let exact = 11.0 * PI / 30.0;
    let a = area(&t);
    let numeric = area_numeric_adaptive(&t, 1e-8);
    let tk = takeuchi_is_arithmetic(3, 5, 10)?;
    let golden_ok = golden
        .takeuchi([3, 5, 10])
        .is_none_or(|g| g == tk.arithmetic);
    let pass = angle_err <= ANGLE_TOL
        && rep.pass
        && (a - exact).abs() <= 1e-9
        && (numeric - exact).abs() <= 1e-6
        && !tk.arithmetic
        && golden_ok;
    Ok(check(
        10,
        "triangle_3_5_10",
        pass,
        json!({
            "angles_within_tolerance": angle_err <= ANGLE_TOL,
            "relations": rep.pass,
            "area": a,
            "area_numeric_agrees": (numeric - exact).abs() <= 1e-6,
            "takeuchi": tk.verdict(),
        }),
    ))
}

/// Fields exercised by the roundtrip and different-ideal checks.
pub fn sample_fields() -> Result<Vec<FieldDescriptor>, CliError> {
    Ok(vec![
        quintic::field(),
        FieldDescriptor::cyclotomic(3)?,
        FieldDescriptor::cyclotomic(8)?,
        FieldDescriptor::imaginary_quadratic(-7)?,
    ])
}

pub fn form_correspondences(seed: u64, golden: &GoldenValues) -> Result<Check, CliError> {
    let fields = sample_fields()?;
    let mut rng = sample_rng(seed);
    let mut roundtrips = 0usize;
    for k in 0..50 {
        let f = &fields[k % fields.len()];
        let t = random_skew_hermitian(&mut rng, f, 1 + k % 3, 5);
        let e = trace_form(&t);
        let back = skew_from_alternating(&e)?;
        if back == t && trace_form(&back) == e && skew_from_alternating_trace_dual(&e)? == t {
            roundtrips += 1;
        }
    }
    let qf = quintic::field();
    let mut max_discrepancy: f64 = 0.0;
    for k in 0..20 {
        let n = 1 + k % 3;
        let t = random_skew_hermitian(&mut rng, &qf, n, 5);
        let dim = n * qf.degree();
        let mut v = || -> Vec<Complex64> {
            (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        };
        let (x, y) = (v(), v());
        max_discrepancy = max_discrepancy.max(agree_discrepancy(&t, &x, &y));
    }
    let mut different_ok = true;
    for f in &fields {
        let eta = different_generator(f)?;
        let inv = eta
            .inverse()
            .ok_or_else(|| CliError::Input("zero different generator".into()))?;
        let dual = (0..f.degree()).all(|j| (&inv * &f.gen_pow(j as i64)).trace_q().is_integer());
        let norm =
            eta.norm_q().abs() == num_rational::BigRational::from_integer(discriminant(f).abs());
        different_ok &= eta.conjugate() == -eta.clone() && dual && norm;
    }
    let disc = discriminant(&qf).abs();
    let disc_ok = golden
        .discriminant("cyclotomic:5")
        .is_none_or(|d| num_bigint::BigInt::from(d) == disc)
        && disc == num_bigint::BigInt::from(125);
    Ok(check(
        11,
        "form_correspondences",
        roundtrips == 50 && max_discrepancy <= 1e-8 && different_ok && disc_ok,
        json!({
            "roundtrips": roundtrips,
            "agree_within_tolerance": max_discrepancy <= 1e-8,
            "different_generators": different_ok,
            "discriminant_q_zeta5": disc.to_string(),
        }),
    ))
}
