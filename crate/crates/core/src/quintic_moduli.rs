//! Real binary quintics and conjugation-stable 5-point configurations on `P¹(C)`:
//! roots, stability, the component index, and stabilizers in `PGL₂(R)`.

use std::fmt;

use nalgebra::{DMatrix, Matrix2, Schur};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for projective equality of points and realness of maps.
pub const TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuliError {
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("a configuration has 5 points counted with multiplicity, got {0}")]
    WrongCount(usize),
    #[error("configuration is not stable under complex conjugation")]
    NotReal,
    #[error("configuration is not smooth")]
    NotSmooth,
    #[error("configuration is not stable")]
    NotStable,
    #[error("support has fewer than 3 points")]
    SmallSupport,
    #[error("cannot parse point coordinate {0:?}")]
    Parse(String),
    #[error("degenerate Möbius map")]
    Degenerate,
}

/// A point `(z : w)` of `P¹(C)`, normalized to `(z : 1)` or `(1 : 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct P1Point {
    pub z: Complex64,
    pub w: Complex64,
}

impl P1Point {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        if w.norm() <= 1e-14 * z.norm().max(1.0) {
            P1Point::infinity()
        } else {
            P1Point {
                z: z / w,
                w: Complex64::new(1.0, 0.0),
            }
        }
    }

    pub fn finite(z: Complex64) -> Self {
        P1Point {
            z,
            w: Complex64::new(1.0, 0.0),
        }
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        P1Point {
            z: Complex64::new(1.0, 0.0),
            w: Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.w.norm() == 0.0
    }

    pub fn conj(&self) -> Self {
        P1Point::new(self.z.conj(), self.w.conj())
    }

    /// Chordal distance on the Riemann sphere.
    pub fn distance(&self, other: &P1Point) -> f64 {
        let num = (self.z * other.w - self.w * other.z).norm();
        let den = (self.z.norm_sqr() + self.w.norm_sqr()).sqrt()
            * (other.z.norm_sqr() + other.w.norm_sqr()).sqrt();
        num / den
    }

    pub fn approx_eq(&self, other: &P1Point) -> bool {
        self.distance(other) <= TOL
    }

    pub fn is_real(&self) -> bool {
        self.approx_eq(&self.conj())
    }

    /// Parses `inf`, `i`, `-i`, `omega`, `omega^2`, `lambda`, `lambda+1`, rationals
    /// `p/q`, decimals and `a+bi`.
    pub fn parse(s: &str) -> Result<Self, ModuliError> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(P1Point::infinity());
        }
        Ok(P1Point::finite(parse_complex(&t)?))
    }
}

/// `λ = ζ_5 + ζ_5^{-1} = (√5 − 1)/2`.
pub fn lambda() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

fn parse_complex(t: &str) -> Result<Complex64, ModuliError> {
    let err = || ModuliError::Parse(t.to_string());
    match t {
        "i" => return Ok(Complex64::i()),
        "-i" => return Ok(-Complex64::i()),
        "omega" => return Ok(omega()),
        "omega^2" | "omega2" => return Ok(omega() * omega()),
        "lambda" => return Ok(Complex64::new(lambda(), 0.0)),
        "lambda+1" => return Ok(Complex64::new(lambda() + 1.0, 0.0)),
        _ => {}
    }
    let real = |x: &str| -> Result<f64, ModuliError> {
        if let Some((p, q)) = x.split_once('/') {
            let p: f64 = p.parse().map_err(|_| err())?;
            let q: f64 = q.parse().map_err(|_| err())?;
            if q == 0.0 {
                return Err(err());
            }
            Ok(p / q)
        } else {
            x.parse().map_err(|_| err())
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        // a+bi, a-bi, bi
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (real(&body[..k])?, imag_part(&body[k..]).ok_or_else(err)?),
            None => (0.0, imag_part(body).ok_or_else(err)?),
        };
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(real(t)?, 0.0))
}

fn imag_part(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.z.im.abs() <= TOL {
            write!(f, "{}", self.z.re)
        } else {
            write!(f, "{}{:+}i", self.z.re, self.z.im)
        }
    }
}

/// A multiset of five points closed under complex conjugation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealConfiguration {
    /// Distinct points with multiplicities, in input order.
    pub support: Vec<(P1Point, usize)>,
}

impl RealConfiguration {
    pub fn new(points: &[P1Point]) -> Result<Self, ModuliError> {
        if points.len() != 5 {
            return Err(ModuliError::WrongCount(points.len()));
        }
        let c = Self::from_points_unchecked(points);
        if !c.is_conjugation_stable() {
            return Err(ModuliError::NotReal);
        }
        Ok(c)
    }

    fn from_points_unchecked(points: &[P1Point]) -> Self {
        let mut support: Vec<(P1Point, usize)> = Vec::new();
        for p in points {
            match support.iter_mut().find(|(q, _)| q.approx_eq(p)) {
                Some((_, m)) => *m += 1,
                None => support.push((*p, 1)),
            }
        }
        RealConfiguration { support }
    }

    pub fn points(&self) -> Vec<P1Point> {
        self.support
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(*p, *m))
            .collect()
    }

    pub fn multiplicity(&self, p: &P1Point) -> usize {
        self.support
            .iter()
            .find(|(q, _)| q.approx_eq(p))
            .map_or(0, |(_, m)| *m)
    }

    pub fn is_conjugation_stable(&self) -> bool {
        self.support
            .iter()
            .all(|(p, m)| self.multiplicity(&p.conj()) == *m)
    }

    pub fn same_multiset(&self, other: &RealConfiguration) -> bool {
        self.support.len() == other.support.len()
            && self
                .support
                .iter()
                .all(|(p, m)| other.multiplicity(p) == *m)
    }
}

/// Roots of `F(x, y) = Σ a_i x^i y^{5−i}` given as `[a_5, a_4, a_3, a_2, a_1, a_0]`.
pub fn roots_of_quintic(coeffs: &[f64; 6]) -> Result<RealConfiguration, ModuliError> {
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(ModuliError::ZeroPolynomial);
    }
    // ascending coefficients of f(x) = F(x, 1)
    let mut asc: Vec<f64> = coeffs.iter().rev().copied().collect();
    while asc.last() == Some(&0.0) {
        asc.pop();
    }
    let deg = asc.len() - 1;
    let mut points = vec![P1Point::infinity(); 5 - deg];
    let zeros = asc.iter().take_while(|&&c| c == 0.0).count();
    points.extend(std::iter::repeat_n(P1Point::real(0.0), zeros));
    let rest = &asc[zeros..];
    let d = rest.len() - 1;
    if d > 0 {
        let lead = rest[d];
        let mut comp = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -rest[i] / lead;
        }
        let eig: Vec<Complex64> = match Schur::try_new(comp, 1e-14, 2000) {
            Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
            None => aberth(rest),
        };
        let roots: Vec<Complex64> = eig.iter().map(|r| polish(rest, *r)).collect();
        points.extend(symmetrize(cluster(&roots)).into_iter().map(P1Point::finite));
    }
    RealConfiguration::new(&points)
}

fn eval(asc: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in asc.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth–Ehrlich simultaneous iteration, used when the QR iteration stalls.
fn aberth(asc: &[f64]) -> Vec<Complex64> {
    let d = asc.len() - 1;
    let radius = 1.0
        + asc[..d]
            .iter()
            .map(|c| (c / asc[d]).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval(asc, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-15 {
            break;
        }
    }
    z
}

/// Newton steps while they reduce the residual.
fn polish(asc: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..50 {
        let (p, dp) = eval(asc, z);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if eval(asc, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Multiple roots come out of the eigenvalue solver as clusters of radius
/// `~ε^{1/k}`; replace each cluster by its mean.
fn cluster(roots: &[Complex64]) -> Vec<Complex64> {
    let tol = 1e-5;
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match groups
            .iter_mut()
            .find(|g| (g[0] - r).norm() <= tol * r.norm().max(1.0))
        {
            Some(g) => g.push(*r),
            None => groups.push(vec![*r]),
        }
    }
    groups
        .into_iter()
        .flat_map(|g| {
            let mean = g.iter().sum::<Complex64>() / g.len() as f64;
            std::iter::repeat_n(mean, g.len())
        })
        .collect()
}

/// Snaps near-real roots onto the real line and makes conjugate pairs exact.
fn symmetrize(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    for r in roots.iter_mut() {
        if r.im.abs() <= 1e-9 * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
    let n = roots.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] || roots[i].im == 0.0 {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| {
            j != i
                && !done[j]
                && (roots[j] - roots[i].conj()).norm() <= 1e-6 * roots[i].norm().max(1.0)
        }) {
            let avg = (roots[i] + roots[j].conj()) / 2.0;
            roots[i] = avg;
            roots[j] = avg.conj();
            done[i] = true;
            done[j] = true;
        }
    }
    roots
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Smooth,
    Stable,
    StrictlyUnstable,
}

pub fn stability(config: &RealConfiguration) -> Stability {
    let max = config.support.iter().map(|(_, m)| *m).max().unwrap_or(0);
    match max {
        1 => Stability::Smooth,
        2 => Stability::Stable,
        _ => Stability::StrictlyUnstable,
    }
}

/// Number of conjugate pairs off `P¹(R)`, for smooth configurations.
pub fn component_index(config: &RealConfiguration) -> Result<usize, ModuliError> {
    if stability(config) != Stability::Smooth {
        return Err(ModuliError::NotSmooth);
    }
    Ok(config.support.iter().filter(|(p, _)| !p.is_real()).count() / 2)
}

/// `(z : w) ↦ (a z + b w : c z + d w)` up to scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub m: [[Complex64; 2]; 2],
}

impl MobiusMap {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self, ModuliError> {
        let g = MobiusMap { m };
        if g.det().norm() <= 1e-14 * g.scale().powi(2) {
            return Err(ModuliError::Degenerate);
        }
        Ok(g.normalized())
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, ModuliError> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Self::new([[r(a), r(b)], [r(c), r(d)]])
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0).unwrap()
    }

    fn scale(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Divides by the entry of largest modulus (first such in reading order).
    pub fn normalized(&self) -> Self {
        let entries: Vec<Complex64> = self.m.iter().flatten().copied().collect();
        let big = entries.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let pivot = entries
            .iter()
            .find(|x| x.norm() >= big * (1.0 - 1e-9))
            .copied()
            .unwrap();
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|x| *x /= pivot);
        MobiusMap { m }
    }

    pub fn apply(&self, p: &P1Point) -> P1Point {
        let [[a, b], [c, d]] = self.m;
        P1Point::new(a * p.z + b * p.w, c * p.z + d * p.w)
    }

    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let a = Matrix2::from_fn(|i, j| self.m[i][j]);
        let b = Matrix2::from_fn(|i, j| other.m[i][j]);
        let c = a * b;
        MobiusMap {
            m: [[c[(0, 0)], c[(0, 1)]], [c[(1, 0)], c[(1, 1)]]],
        }
        .normalized()
    }

    pub fn inverse(&self) -> MobiusMap {
        let [[a, b], [c, d]] = self.m;
        MobiusMap {
            m: [[d, -b], [-c, a]],
        }
        .normalized()
    }

    /// Distance between normalized representatives.
    pub fn distance(&self, other: &MobiusMap) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        let d1: f64 =
            a.m.iter()
                .flatten()
                .zip(b.m.iter().flatten())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
        let d2: f64 =
            a.m.iter()
                .flatten()
                .zip(b.m.iter().flatten())
                .map(|(x, y)| (x + y).norm())
                .fold(0.0, f64::max);
        d1.min(d2)
    }

    pub fn approx_eq(&self, other: &MobiusMap) -> bool {
        self.distance(other) <= TOL.sqrt()
    }

    /// Whether the matrix is a complex multiple of a real matrix.
    pub fn is_real(&self) -> bool {
        let n = self.normalized();
        n.m.iter().flatten().all(|x| x.im.abs() <= TOL)
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&MobiusMap::identity())
    }

    /// The unique map with `p_i ↦ q_i`.
    pub fn from_triples(p: [P1Point; 3], q: [P1Point; 3]) -> Result<Self, ModuliError> {
        let mp = to_standard(p)?;
        let mq = to_standard(q)?;
        Ok(mq.inverse().compose(&mp))
    }

    /// Order in `PGL₂`, if at most `max`.
    pub fn order(&self, max: u32) -> Option<u32> {
        let mut g = *self;
        for k in 1..=max {
            if g.is_identity() {
                return Some(k);
            }
            g = g.compose(self);
        }
        None
    }
}

fn det2(a: &P1Point, b: &P1Point) -> Complex64 {
    a.z * b.w - a.w * b.z
}

/// The map sending `p_0, p_1, p_2` to `0, ∞, 1`.
fn to_standard(p: [P1Point; 3]) -> Result<MobiusMap, ModuliError> {
    let s = det2(&p[2], &p[1]);
    let t = det2(&p[2], &p[0]);
    // Z ↦ det(Z, p0)·det(p2, p1) : det(Z, p1)·det(p2, p0)
    MobiusMap::new([[p[0].w * s, -p[0].z * s], [p[1].w * t, -p[1].z * t]])
}

pub fn apply_mobius(g: &MobiusMap, config: &RealConfiguration) -> RealConfiguration {
    RealConfiguration {
        support: config
            .support
            .iter()
            .map(|(p, m)| (g.apply(p), *m))
            .collect(),
    }
}

/// `ν(z) = 1/z`.
pub fn nu() -> MobiusMap {
    MobiusMap::real(0.0, 1.0, 1.0, 0.0).unwrap()
}

/// `ρ(z) = −1/(z + 1)`.
pub fn rho() -> MobiusMap {
    MobiusMap::real(0.0, -1.0, 1.0, 1.0).unwrap()
}

/// `γ(z) = ((λ + 1) z − 1)/(z + 1)`.
pub fn gamma() -> MobiusMap {
    MobiusMap::real(lambda() + 1.0, -1.0, 1.0, 1.0).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupType {
    Trivial,
    Z2,
    D3,
    D5,
    /// Any other finite group: this would contradict the classification.
    Other {
        order: usize,
        max_element_order: u32,
    },
}

impl GroupType {
    pub fn order(&self) -> usize {
        match self {
            GroupType::Trivial => 1,
            GroupType::Z2 => 2,
            GroupType::D3 => 6,
            GroupType::D5 => 10,
            GroupType::Other { order, .. } => *order,
        }
    }

    pub fn is_expected(&self) -> bool {
        !matches!(self, GroupType::Other { .. })
    }

    pub fn name(&self) -> String {
        match self {
            GroupType::Trivial => "trivial".into(),
            GroupType::Z2 => "Z2".into(),
            GroupType::D3 => "D3".into(),
            GroupType::D5 => "D5".into(),
            GroupType::Other {
                order,
                max_element_order,
            } => format!("order{order}_maxorder{max_element_order}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub group_type: GroupType,
    pub order: usize,
    pub elements: Vec<MobiusMap>,
    pub generators: Vec<MobiusMap>,
    pub matched_normal_form: Option<String>,
}

fn preserves(g: &MobiusMap, config: &RealConfiguration) -> bool {
    config
        .support
        .iter()
        .all(|(p, m)| config.multiplicity(&g.apply(p)) == *m)
}

fn ordered_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Real Möbius maps preserving the configuration with multiplicities: every such map
/// is determined by the images of three support points.
pub fn stabilizer_elements(config: &RealConfiguration) -> Result<Vec<MobiusMap>, ModuliError> {
    let pts: Vec<P1Point> = config.support.iter().map(|(p, _)| *p).collect();
    if pts.len() < 3 {
        return Err(ModuliError::SmallSupport);
    }
    let src = [pts[0], pts[1], pts[2]];
    let mut elems: Vec<MobiusMap> = Vec::new();
    for t in ordered_triples(pts.len()) {
        let dst = [pts[t[0]], pts[t[1]], pts[t[2]]];
        let Ok(g) = MobiusMap::from_triples(src, dst) else {
            continue;
        };
        if g.is_real() && preserves(&g, config) && !elems.iter().any(|h| h.approx_eq(&g)) {
            elems.push(g);
        }
    }
    // identity first, then by order
    elems.sort_by_key(|g| g.order(12).unwrap_or(u32::MAX));
    Ok(elems)
}

fn classify_group(elems: &[MobiusMap]) -> GroupType {
    let orders: Vec<u32> = elems.iter().map(|g| g.order(60).unwrap_or(0)).collect();
    let max = orders.iter().copied().max().unwrap_or(1);
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    match (elems.len(), max, involutions) {
        (1, _, _) => GroupType::Trivial,
        (2, 2, 1) => GroupType::Z2,
        (6, 3, 3) => GroupType::D3,
        (10, 5, 5) => GroupType::D5,
        (order, m, _) => GroupType::Other {
            order,
            max_element_order: m,
        },
    }
}

fn closed_under_composition(elems: &[MobiusMap]) -> bool {
    elems.iter().all(|a| {
        elems
            .iter()
            .all(|b| elems.iter().any(|c| c.approx_eq(&a.compose(b))))
    })
}

pub fn stabilizer(config: &RealConfiguration) -> Result<StabilizerReport, ModuliError> {
    if stability(config) == Stability::StrictlyUnstable {
        return Err(ModuliError::NotStable);
    }
    let elems = stabilizer_elements(config)?;
    debug_assert!(closed_under_composition(&elems));
    let group_type = if closed_under_composition(&elems) {
        classify_group(&elems)
    } else {
        GroupType::Other {
            order: elems.len(),
            max_element_order: 0,
        }
    };
    let order_of = |g: &MobiusMap| g.order(60).unwrap_or(0);
    let generators = match group_type {
        GroupType::Trivial => vec![],
        GroupType::Z2 => vec![elems[1]],
        GroupType::D3 | GroupType::D5 => {
            let n = if group_type == GroupType::D3 { 3 } else { 5 };
            let rot = *elems.iter().find(|g| order_of(g) == n).unwrap();
            let refl = *elems.iter().find(|g| order_of(g) == 2).unwrap();
            vec![rot, refl]
        }
        GroupType::Other { .. } => elems.clone(),
    };
    let matched_normal_form = match_normal_form(config, &group_type).map(|(tag, _)| tag);
    Ok(StabilizerReport {
        order: elems.len(),
        group_type,
        elements: elems,
        generators,
        matched_normal_form,
    })
}

/// Real maps sending the configuration onto `target` (the `PGL₂(R)`-orbit test).
pub fn real_equivalences(config: &RealConfiguration, target: &RealConfiguration) -> Vec<MobiusMap> {
    let src: Vec<(P1Point, usize)> = config.support.clone();
    let dst: Vec<(P1Point, usize)> = target.support.clone();
    if src.len() < 3 || src.len() != dst.len() {
        return vec![];
    }
    let mut out: Vec<MobiusMap> = Vec::new();
    for t in ordered_triples(dst.len()) {
        if (0..3).any(|i| src[i].1 != dst[t[i]].1) {
            continue;
        }
        let Ok(g) = MobiusMap::from_triples(
            [src[0].0, src[1].0, src[2].0],
            [dst[t[0]].0, dst[t[1]].0, dst[t[2]].0],
        ) else {
            continue;
        };
        if g.is_real()
            && apply_mobius(&g, config).same_multiset(target)
            && !out.iter().any(|h| h.approx_eq(&g))
        {
            out.push(g);
        }
    }
    out
}

pub fn d5_normal_form() -> RealConfiguration {
    let l = lambda();
    RealConfiguration::new(&[
        P1Point::real(0.0),
        P1Point::real(-1.0),
        P1Point::infinity(),
        P1Point::real(l + 1.0),
        P1Point::real(l),
    ])
    .unwrap()
}

pub fn d3_normal_form() -> RealConfiguration {
    let w = omega();
    RealConfiguration::new(&[
        P1Point::real(-1.0),
        P1Point::infinity(),
        P1Point::real(0.0),
        P1Point::finite(w),
        P1Point::finite(w * w),
    ])
    .unwrap()
}

/// A configuration `(a, b, c, β, β^{-1})`-style anchor for the involution cases.
struct Z2Case {
    tag: &'static str,
    /// Anchor points (with multiplicity) that a normalizing map must hit, and the
    /// number of remaining points of multiplicity one.
    anchors: Vec<(P1Point, usize)>,
    check: fn(&[(P1Point, usize)]) -> bool,
}

fn remaining_is_beta_pair(
    rest: &[(P1Point, usize)],
    on_circle_ok: bool,
    excluded: &[Complex64],
) -> bool {
    if rest.len() != 2 || rest.iter().any(|(_, m)| *m != 1) {
        return false;
    }
    let (a, b) = (rest[0].0, rest[1].0);
    if a.is_infinity() || b.is_infinity() {
        return false;
    }
    let beta = a.z;
    let inv_ok = (beta * b.z - 1.0).norm() <= TOL.sqrt();
    let real = beta.im.abs() <= TOL.sqrt();
    let circle = (beta.norm() - 1.0).abs() <= TOL.sqrt();
    inv_ok
        && (real || (on_circle_ok && circle))
        && excluded.iter().all(|e| (beta - e).norm() > TOL.sqrt())
}

fn z2_cases() -> Vec<Z2Case> {
    let r = P1Point::real;
    let i = P1Point::finite(Complex64::i());
    let mi = P1Point::finite(-Complex64::i());
    let inf = P1Point::infinity();
    vec![
        Z2Case {
            tag: "Z2 case 1: (-1, 0, inf, beta, 1/beta)",
            anchors: vec![(r(-1.0), 1), (r(0.0), 1), (inf, 1)],
            check: |rest| {
                remaining_is_beta_pair(
                    rest,
                    true,
                    &[
                        Complex64::new(-1.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        Complex64::new(1.0, 0.0),
                    ],
                )
            },
        },
        Z2Case {
            tag: "Z2 case 2: (-1, i, -i, beta, 1/beta)",
            anchors: vec![(r(-1.0), 1), (i, 1), (mi, 1)],
            check: |rest| {
                remaining_is_beta_pair(
                    rest,
                    true,
                    &[
                        Complex64::new(-1.0, 0.0),
                        Complex64::new(1.0, 0.0),
                        Complex64::i(),
                        -Complex64::i(),
                    ],
                )
            },
        },
        Z2Case {
            tag: "Z2 case 3: (-1, -1, 1, 0, inf)",
            anchors: vec![(r(-1.0), 2), (r(0.0), 1), (inf, 1)],
            check: |rest| single_at(rest, 1.0),
        },
        Z2Case {
            tag: "Z2 case 4: (-1, -1, 1, i, -i)",
            anchors: vec![(r(-1.0), 2), (i, 1), (mi, 1)],
            check: |rest| single_at(rest, 1.0),
        },
        Z2Case {
            tag: "Z2 case 5: (0, 0, inf, inf, -1)",
            anchors: vec![(r(0.0), 2), (inf, 2), (r(-1.0), 1)],
            check: |rest| rest.is_empty(),
        },
        Z2Case {
            tag: "Z2 case 6: (-1, i, i, -i, -i)",
            anchors: vec![(r(-1.0), 1), (i, 2), (mi, 2)],
            check: |rest| rest.is_empty(),
        },
        Z2Case {
            tag: "Z2 node pair: (inf, i, i, -i, -i)",
            anchors: vec![(inf, 1), (i, 2), (mi, 2)],
            check: |rest| rest.is_empty(),
        },
    ]
}

/// The third point of a `ν`-stable configuration with a double point at `−1` is the
/// other fixed point `1` of `ν`.
fn single_at(rest: &[(P1Point, usize)], x: f64) -> bool {
    rest.len() == 1 && rest[0].1 == 1 && rest[0].0.approx_eq(&P1Point::real(x))
}

/// Matches the configuration with one of the listed normal forms via a real map.
pub fn match_normal_form(
    config: &RealConfiguration,
    group: &GroupType,
) -> Option<(String, MobiusMap)> {
    match group {
        GroupType::D5 => real_equivalences(config, &d5_normal_form())
            .first()
            .map(|g| ("D5: (0, -1, inf, lambda+1, lambda)".to_string(), *g)),
        GroupType::D3 => real_equivalences(config, &d3_normal_form())
            .first()
            .map(|g| ("D3: (-1, inf, 0, omega, omega^2)".to_string(), *g)),
        GroupType::Z2 => z2_case_matches(config).into_iter().next(),
        _ => None,
    }
}

/// Every listed involution case the configuration is real-equivalent to, with a
/// normalizing map. The list is not disjoint: case 1 with `|β| = 1` and case 2 with
/// real `β` are the same orbit.
pub fn z2_case_matches(config: &RealConfiguration) -> Vec<(String, MobiusMap)> {
    let pts = &config.support;
    let mut out = Vec::new();
    for case in z2_cases() {
        let anchors = &case.anchors;
        let hit = ordered_triples(pts.len()).into_iter().find_map(|t| {
            if (0..3).any(|k| pts[t[k]].1 != anchors[k].1) {
                return None;
            }
            let src = [pts[t[0]].0, pts[t[1]].0, pts[t[2]].0];
            let dst = [anchors[0].0, anchors[1].0, anchors[2].0];
            let g = MobiusMap::from_triples(src, dst)
                .ok()
                .filter(|g| g.is_real())?;
            let image = apply_mobius(&g, config);
            let rest: Vec<(P1Point, usize)> = image
                .support
                .iter()
                .filter(|(p, _)| !anchors.iter().any(|(a, _)| a.approx_eq(p)))
                .copied()
                .collect();
            (case.check)(&rest).then_some(g)
        });
        if let Some(g) = hit {
            out.push((case.tag.to_string(), g));
        }
    }
    out
}

/// A random real Möbius map with `|det| > 0.3` and entries in `[−3, 3]`.
pub fn random_real_map(rng: &mut impl Rng) -> MobiusMap {
    loop {
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-3.0..3.0)).collect();
        if (v[0] * v[3] - v[1] * v[2]).abs() > 0.3 {
            return MobiusMap::real(v[0], v[1], v[2], v[3]).unwrap();
        }
    }
}

/// A random stable configuration, moved by a random real map. Samples generic points
/// with 0–2 conjugate pairs, double points, `ν`-symmetric configurations and the
/// special normal forms.
pub fn random_stable_configuration<R: Rng>(rng: &mut R) -> RealConfiguration {
    let kind = rng.random_range(0..6);
    let rnd = |rng: &mut R| rng.random_range(-4.0..4.0f64);
    let mut pts: Vec<P1Point> = Vec::new();
    match kind {
        // generic with i conjugate pairs
        0..=2 => {
            for _ in 0..kind {
                let z = Complex64::new(rnd(rng), rng.random_range(0.2..3.0));
                pts.push(P1Point::finite(z));
                pts.push(P1Point::finite(z.conj()));
            }
            while pts.len() < 5 {
                pts.push(P1Point::real(rnd(rng)));
            }
        }
        // one or two double points
        3 => {
            let doubles = rng.random_range(1..=2);
            if rng.random_bool(0.5) && doubles == 2 {
                let z = Complex64::new(rnd(rng), rng.random_range(0.2..3.0));
                pts.extend([
                    P1Point::finite(z),
                    P1Point::finite(z),
                    P1Point::finite(z.conj()),
                    P1Point::finite(z.conj()),
                ]);
            } else {
                for _ in 0..doubles {
                    let x = rnd(rng);
                    pts.extend([P1Point::real(x), P1Point::real(x)]);
                }
            }
            while pts.len() < 5 {
                pts.push(P1Point::real(rnd(rng)));
            }
        }
        // ν-symmetric: {x, 1/x} pairs plus a fixed point ±1
        4 => {
            let x: f64 = rng.random_range(1.2..4.0);
            pts.extend([P1Point::real(x), P1Point::real(1.0 / x)]);
            if rng.random_bool(0.5) {
                let t = Complex64::from_polar(1.0, rng.random_range(0.2..1.4));
                pts.extend([P1Point::finite(t), P1Point::finite(t.conj())]);
            } else {
                pts.extend([P1Point::real(0.0), P1Point::infinity()]);
            }
            pts.push(P1Point::real(-1.0));
        }
        // a special configuration moved by a random real map
        _ => {
            let specials = [
                d5_normal_form().points(),
                d3_normal_form().points(),
                vec![
                    P1Point::infinity(),
                    P1Point::finite(Complex64::i()),
                    P1Point::finite(Complex64::i()),
                    P1Point::finite(-Complex64::i()),
                    P1Point::finite(-Complex64::i()),
                ],
                vec![
                    P1Point::real(0.0),
                    P1Point::real(0.0),
                    P1Point::infinity(),
                    P1Point::infinity(),
                    P1Point::real(-1.0),
                ],
            ];
            pts = specials[rng.random_range(0..specials.len())].clone();
        }
    }
    let g = random_real_map(rng);
    apply_mobius(
        &g,
        &RealConfiguration::new(&pts).expect("valid configuration"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aberth_finds_roots() {
        // (x − 1)(x + 2)(x² + 4) = x⁴ + x³ + 2x² + 4x − 8
        let roots = aberth(&[-8.0, 4.0, 2.0, 1.0, 1.0]);
        for want in [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
        ] {
            assert!(roots.iter().any(|z| (z - want).norm() < 1e-10), "{roots:?}");
        }
    }
}
