//! The real hyperbolic plane in the upper half-plane model: geodesic reflections,
//! triangles with prescribed angles, relation checks, area, and Takeuchi's
//! arithmeticity criterion for triangle groups.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycElt, CyclotomicError, FieldDescriptor};

pub const RELATION_TOL: f64 = 1e-9;
pub const ANGLE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("orders must be at least 2: {0:?}")]
    BadOrder([u32; 3]),
    #[error("angles {0:?} do not bound a hyperbolic triangle")]
    NotHyperbolic([f64; 3]),
    #[error("point is not in the upper half-plane")]
    NotInterior,
    #[error("geodesics do not meet in the upper half-plane")]
    NoIntersection,
    #[error("triangle construction failed")]
    Construction,
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

/// A point of the upper half-plane (or its boundary `R ∪ {∞}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub z: Complex64,
    pub boundary: bool,
}

impl HPoint {
    pub fn new(z: Complex64) -> Result<Self, HyperbolicError> {
        if z.im > 0.0 {
            Ok(HPoint { z, boundary: false })
        } else {
            Err(HyperbolicError::NotInterior)
        }
    }

    pub fn distance(&self, other: &HPoint) -> f64 {
        let d = (self.z - other.z).norm_sqr();
        (1.0 + d / (2.0 * self.z.im * other.z.im)).acosh()
    }
}

/// A geodesic: `Re z = c`, or the half-circle `|z − c| = ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicLine {
    Vertical { c: f64 },
    Circle { c: f64, radius: f64 },
}

impl GeodesicLine {
    /// Coefficients `(a, b, d)` of `a|z|² + b Re z + d = 0`, scaled so that
    /// `b² − 4ad = 1`.
    pub fn coefficients(&self) -> [f64; 3] {
        match *self {
            GeodesicLine::Vertical { c } => [0.0, 1.0, -c],
            GeodesicLine::Circle { c, radius } => [
                1.0 / (2.0 * radius),
                -c / radius,
                (c * c - radius * radius) / (2.0 * radius),
            ],
        }
    }

    fn from_coefficients(v: [f64; 3]) -> Result<Self, HyperbolicError> {
        let [a, b, d] = v;
        let q = b * b - 4.0 * a * d;
        if q <= 0.0 {
            return Err(HyperbolicError::Construction);
        }
        if a.abs() <= 1e-13 * q.sqrt() {
            return Ok(GeodesicLine::Vertical { c: -d / b });
        }
        let c = -b / (2.0 * a);
        Ok(GeodesicLine::Circle {
            c,
            radius: q.sqrt() / (2.0 * a.abs()),
        })
    }

    /// Residual of the defining equation at `z`.
    pub fn residual(&self, z: Complex64) -> f64 {
        match *self {
            GeodesicLine::Vertical { c } => z.re - c,
            GeodesicLine::Circle { c, radius } => ((z - c).norm() - radius) / radius.max(1.0),
        }
    }

    /// The reflection in this geodesic.
    pub fn reflection(&self) -> Isometry {
        match *self {
            // z ↦ 2c − z̄
            GeodesicLine::Vertical { c } => Isometry::new(Matrix2::new(-1.0, 2.0 * c, 0.0, 1.0)),
            // z ↦ c + ρ²/(z̄ − c)
            GeodesicLine::Circle { c, radius } => {
                Isometry::new(Matrix2::new(c, radius * radius - c * c, 1.0, -c) / radius)
            }
        }
    }

    /// Unit tangent at `v` pointing along the geodesic towards `w`.
    fn tangent_towards(&self, v: Complex64, w: Complex64) -> Complex64 {
        match *self {
            GeodesicLine::Vertical { .. } => Complex64::new(0.0, (w.im - v.im).signum()),
            GeodesicLine::Circle { c, .. } => {
                let t = Complex64::i() * (v - c);
                let t = if (w - c).arg() > (v - c).arg() { t } else { -t };
                t / t.norm()
            }
        }
    }
}

/// Angle between two geodesics from their normalized coefficient vectors.
fn form(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[1] * v[1] - 2.0 * u[0] * v[2] - 2.0 * u[2] * v[0]
}

/// Intersection point of two geodesics inside the upper half-plane.
pub fn intersect(l: &GeodesicLine, m: &GeodesicLine) -> Result<Complex64, HyperbolicError> {
    let on_circle = |x: f64, c: f64, r: f64| -> Result<Complex64, HyperbolicError> {
        let h = r * r - (x - c) * (x - c);
        if h <= 0.0 {
            return Err(HyperbolicError::NoIntersection);
        }
        Ok(Complex64::new(x, h.sqrt()))
    };
    match (*l, *m) {
        (GeodesicLine::Vertical { .. }, GeodesicLine::Vertical { .. }) => {
            Err(HyperbolicError::NoIntersection)
        }
        (GeodesicLine::Vertical { c: x }, GeodesicLine::Circle { c, radius })
        | (GeodesicLine::Circle { c, radius }, GeodesicLine::Vertical { c: x }) => {
            on_circle(x, c, radius)
        }
        (
            GeodesicLine::Circle { c: c1, radius: r1 },
            GeodesicLine::Circle { c: c2, radius: r2 },
        ) => {
            if (c1 - c2).abs() <= 1e-15 {
                return Err(HyperbolicError::NoIntersection);
            }
            let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
            on_circle(x, c1, r1)
        }
    }
}

/// An isometry `z ↦ (az + b)/(cz + d)` if `det > 0`, `z ↦ (a z̄ + b)/(c z̄ + d)` if
/// `det < 0`; normalized to `|det| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub m: Matrix2<f64>,
}

impl Isometry {
    pub fn new(m: Matrix2<f64>) -> Self {
        let d = m.determinant();
        Isometry {
            m: m / d.abs().sqrt(),
        }
    }

    pub fn identity() -> Self {
        Isometry {
            m: Matrix2::identity(),
        }
    }

    pub fn reverses_orientation(&self) -> bool {
        self.m.determinant() < 0.0
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.reverses_orientation() {
            z.conj()
        } else {
            z
        };
        (w * self.m[(0, 0)] + self.m[(0, 1)]) / (w * self.m[(1, 0)] + self.m[(1, 1)])
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::new(self.m * other.m)
    }

    pub fn pow(&self, n: u32) -> Isometry {
        (0..n).fold(Isometry::identity(), |acc, _| acc.compose(self))
    }

    /// Distance to the identity in `PGL₂(R)`: `min ‖M ∓ I‖_max` after normalization.
    pub fn distance_to_identity(&self) -> f64 {
        let i = Matrix2::<f64>::identity();
        let a = (self.m - i).abs().max();
        let b = (self.m + i).abs().max();
        a.min(b)
    }

    /// Rotation angle in `[0, 2π)` of an elliptic orientation-preserving isometry,
    /// up to inversion: `|tr| = 2 cos(θ/2)`.
    pub fn rotation_angle(&self) -> Option<f64> {
        if self.reverses_orientation() {
            return None;
        }
        let t = self.m.trace().abs() / 2.0;
        (t < 1.0 + 1e-12).then(|| 2.0 * t.min(1.0).acos())
    }
}

/// Reflections in the sides of a geodesic triangle, with vertex `V_{ij} = L_i ∩ L_j`
/// of angle `π/n_{ij}`: `orders = (n₁₂, n₁₃, n₂₃)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleGroupSpec {
    pub orders: [u32; 3],
    pub angles: [f64; 3],
    pub sides: [GeodesicLine; 3],
    /// `[V₁₂, V₁₃, V₂₃]`.
    pub vertices: [Complex64; 3],
    pub reflections: [Isometry; 3],
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn check_orders(orders: [u32; 3]) -> Result<(), HyperbolicError> {
    if orders.iter().any(|&n| n < 2) {
        return Err(HyperbolicError::BadOrder(orders));
    }
    Ok(())
}

/// `1/p + 1/q + 1/r < 1`, decided in integers.
pub fn is_hyperbolic(orders: [u32; 3]) -> bool {
    let [p, q, r] = orders.map(u64::from);
    q * r + p * r + p * q < p * q * r
}

pub fn build_triangle(p: u32, q: u32, r: u32) -> Result<TriangleGroupSpec, HyperbolicError> {
    let orders = [p, q, r];
    check_orders(orders)?;
    let angles = orders.map(|n| PI / n as f64);
    if !is_hyperbolic(orders) {
        return Err(HyperbolicError::NotHyperbolic(angles));
    }
    let mut spec = triangle_with_angles(angles)?;
    spec.orders = orders;
    Ok(spec)
}

/// Triangle with vertex angles `(α₁₂, α₁₃, α₂₃)`; `L₁` is the imaginary axis and
/// `V₁₂ = i`. The `orders` field is filled with the nearest integers `π/α`.
pub fn triangle_with_angles(angles: [f64; 3]) -> Result<TriangleGroupSpec, HyperbolicError> {
    if angles.iter().any(|&a| a <= 0.0 || a >= PI) || angles.iter().sum::<f64>() >= PI {
        return Err(HyperbolicError::NotHyperbolic(angles));
    }
    let [a12, a13, a23] = angles;
    let l1 = GeodesicLine::Vertical { c: 0.0 };
    // the circle through i meeting the imaginary axis at angle α₁₂
    let c2 = a12.cos() / a12.sin();
    let l2 = GeodesicLine::Circle {
        c: c2,
        radius: 1.0 / a12.sin(),
    };
    let n1 = l1.coefficients();
    let n2 = l2.coefficients();
    // n₃ with ⟨n₃, n₁⟩ = ±cos α₁₃, ⟨n₃, n₂⟩ = ±cos α₂₃, ⟨n₃, n₃⟩ = 1
    let mut candidates = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            candidates.extend(solve_third(&n1, &n2, s1 * a13.cos(), s2 * a23.cos()));
        }
    }
    let v12 = Complex64::i();
    let mut best: Option<TriangleGroupSpec> = None;
    for n3 in candidates {
        let Ok(l3) = GeodesicLine::from_coefficients(n3) else {
            continue;
        };
        let (Ok(v13), Ok(v23)) = (intersect(&l1, &l3), intersect(&l2, &l3)) else {
            continue;
        };
        if v13.im < v12.im {
            // deterministic choice: V₁₃ above V₁₂ on the imaginary axis
            continue;
        }
        let sides = [l1, l2, l3];
        let vertices = [v12, v13, v23];
        let measured = interior_angles(&sides, &vertices);
        if measured
            .iter()
            .zip(angles.iter())
            .all(|(m, a)| (m - a).abs() <= 1e-9)
        {
            let cand = TriangleGroupSpec {
                orders: angles.map(|a| (PI / a).round() as u32),
                angles,
                sides,
                vertices,
                reflections: sides.map(|l| l.reflection()),
            };
            if best.as_ref().is_none_or(|b| v23.re > b.vertices[2].re) {
                best = Some(cand);
            }
        }
    }
    best.ok_or(HyperbolicError::Construction)
}

/// All unit vectors `x` with `⟨x, n₁⟩ = t₁`, `⟨x, n₂⟩ = t₂`.
fn solve_third(n1: &[f64; 3], n2: &[f64; 3], t1: f64, t2: f64) -> Vec<[f64; 3]> {
    // ⟨x, n⟩ = x₁ n₁ − 2 x₀ n₂ − 2 x₂ n₀ is linear in x: rows of the system
    let row = |n: &[f64; 3]| [-2.0 * n[2], n[1], -2.0 * n[0]];
    let (r1, r2) = (row(n1), row(n2));
    // kernel direction k = r1 × r2 and a particular solution in span(r1, r2)
    let k = [
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    ];
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let g = [
        [dot(&r1, &r1), dot(&r1, &r2)],
        [dot(&r2, &r1), dot(&r2, &r2)],
    ];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det.abs() < 1e-14 {
        return vec![];
    }
    let u = (t1 * g[1][1] - t2 * g[0][1]) / det;
    let v = (t2 * g[0][0] - t1 * g[1][0]) / det;
    let x0: [f64; 3] = std::array::from_fn(|i| u * r1[i] + v * r2[i]);
    // ⟨x0 + s k, x0 + s k⟩ = 1
    let a = form(&k, &k);
    let b = 2.0 * form(&x0, &k);
    let c = form(&x0, &x0) - 1.0;
    let disc = b * b - 4.0 * a * c;
    if a.abs() < 1e-14 || disc < 0.0 {
        return vec![];
    }
    [1.0, -1.0]
        .iter()
        .map(|sg| {
            let s = (-b + sg * disc.sqrt()) / (2.0 * a);
            std::array::from_fn(|i| x0[i] + s * k[i])
        })
        .collect()
}

/// Interior angles at `[V₁₂, V₁₃, V₂₃]` measured from tangent vectors.
pub fn interior_angles(sides: &[GeodesicLine; 3], vertices: &[Complex64; 3]) -> [f64; 3] {
    let [v12, v13, v23] = *vertices;
    let angle =
        |l: &GeodesicLine, m: &GeodesicLine, v: Complex64, to_l: Complex64, to_m: Complex64| {
            let a = l.tangent_towards(v, to_l);
            let b = m.tangent_towards(v, to_m);
            (a.re * b.re + a.im * b.im).clamp(-1.0, 1.0).acos()
        };
    [
        angle(&sides[0], &sides[1], v12, v13, v23),
        angle(&sides[0], &sides[2], v13, v12, v23),
        angle(&sides[1], &sides[2], v23, v12, v13),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub involution_errors: [f64; 3],
    pub relation_errors: [f64; 3],
    pub rotation_angle_errors: [f64; 3],
    pub orientation_ok: bool,
    pub pass: bool,
}

/// Checks `R_i² = 1` and `(R_i R_j)^{n_ij} = 1` with rotation angle `2π/n_ij`.
pub fn presentation_report(spec: &TriangleGroupSpec, tol: f64) -> PresentationReport {
    let r = &spec.reflections;
    let involution_errors = r.map(|x| x.compose(&x).distance_to_identity());
    let mut relation_errors = [0.0; 3];
    let mut rotation_angle_errors = [0.0; 3];
    let mut orientation_ok = r.iter().all(|x| x.reverses_orientation());
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        let n = spec.orders[k];
        let prod = r[i].compose(&r[j]);
        orientation_ok &= !prod.reverses_orientation();
        relation_errors[k] = prod.pow(n).distance_to_identity();
        let want = 2.0 * PI / n as f64;
        rotation_angle_errors[k] = prod.rotation_angle().map_or(f64::INFINITY, |a| {
            (a - want).abs().min((2.0 * PI - a - want).abs())
        });
    }
    let pass = orientation_ok
        && involution_errors
            .iter()
            .chain(&relation_errors)
            .chain(&rotation_angle_errors)
            .all(|&e| e <= tol);
    PresentationReport {
        involution_errors,
        relation_errors,
        rotation_angle_errors,
        orientation_ok,
        pass,
    }
}

pub fn verify_presentation(spec: &TriangleGroupSpec, tol: f64) -> bool {
    presentation_report(spec, tol).pass
}

/// Gauss–Bonnet: `π − (α₁₂ + α₁₃ + α₂₃)`.
pub fn area(spec: &TriangleGroupSpec) -> f64 {
    PI - spec.angles.iter().sum::<f64>()
}

/// Upper half-plane → Klein disk, where geodesics are chords.
fn to_klein(z: Complex64) -> [f64; 2] {
    let w = (z - Complex64::i()) / (z + Complex64::i());
    let s = 2.0 / (1.0 + w.norm_sqr());
    [w.re * s, w.im * s]
}

fn from_klein(k: [f64; 2]) -> Complex64 {
    let r2 = k[0] * k[0] + k[1] * k[1];
    let w = Complex64::new(k[0], k[1]) / (1.0 + (1.0 - r2).sqrt());
    Complex64::i() * (1.0 + w) / (1.0 - w)
}

/// Integrates the area element `dx dy/(1 − x² − y²)^{3/2}` of the Klein model over
/// the (Euclidean) image triangle with a composite Simpson rule on the collapsed
/// square `(u, v) ↦ A + u(B − A) + uv(C − B)`.
pub fn area_numeric(spec: &TriangleGroupSpec, n: usize) -> f64 {
    // recenter so that the Klein centroid sits at the origin; the integrand is then
    // smooth and bounded on the triangle
    let mut v = spec.vertices;
    for _ in 0..3 {
        let k = v.map(to_klein);
        let g = [
            (k[0][0] + k[1][0] + k[2][0]) / 3.0,
            (k[0][1] + k[1][1] + k[2][1]) / 3.0,
        ];
        let z0 = from_klein(g);
        v = v.map(|z| (z - z0.re) / z0.im);
    }
    let [a, b, c] = v.map(to_klein);
    let ba = [b[0] - a[0], b[1] - a[1]];
    let cb = [c[0] - b[0], c[1] - b[1]];
    let jac = (ba[0] * cb[1] - ba[1] * cb[0]).abs();
    let n = n + n % 2;
    let h = 1.0 / n as f64;
    let w = |k: usize| {
        if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut total = 0.0;
    for i in 0..=n {
        let u = i as f64 * h;
        for j in 0..=n {
            let v = j as f64 * h;
            let x = a[0] + u * ba[0] + u * v * cb[0];
            let y = a[1] + u * ba[1] + u * v * cb[1];
            let f = u / (1.0 - x * x - y * y).powf(1.5);
            total += w(i) * w(j) * f;
        }
    }
    total * jac * h * h / 9.0
}

/// [`area_numeric`] with the mesh doubled until successive values agree to `tol`.
pub fn area_numeric_adaptive(spec: &TriangleGroupSpec, tol: f64) -> f64 {
    let mut n = 64;
    let mut prev = area_numeric(spec, n);
    while n < 1 << 14 {
        n *= 2;
        let next = area_numeric(spec, n);
        if (next - prev).abs() <= tol {
            return next;
        }
        prev = next;
    }
    prev
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingValue {
    /// `σ_k: ζ_{2L} ↦ ζ_{2L}^k`.
    pub k: u32,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TakeuchiReport {
    pub orders: [u32; 3],
    pub arithmetic: bool,
    /// Conductor `2L`, `L = lcm(p, q, r)`, of the ambient cyclotomic field.
    pub conductor: u32,
    /// Degree of `k₁ = Q(cos²(π/e_i), cos(π/e₁)cos(π/e₂)cos(π/e₃))`.
    pub trace_field_degree: usize,
    /// `D = Σ cos²(π/e_i) + 2 ∏ cos(π/e_i) − 1` at the identity.
    pub value_at_identity: f64,
    /// `σ(D)` for one `σ` per non-identity restriction to `k₁`.
    pub other_embeddings: Vec<EmbeddingValue>,
}

impl TakeuchiReport {
    pub fn verdict(&self) -> &'static str {
        if self.arithmetic {
            "arithmetic"
        } else {
            "non_arithmetic"
        }
    }
}

/// Takeuchi's criterion: `Δ(e₁, e₂, e₃)` is arithmetic iff `σ(D) < 0` for every real
/// embedding `σ` of `Q(cos(π/e_i))` that is not the identity on `k₁`. Computed
/// exactly in `Q(ζ_{2L})`: restrictions are compared with exact Galois images and
/// signs are certified.
pub fn takeuchi_is_arithmetic(p: u32, q: u32, r: u32) -> Result<TakeuchiReport, HyperbolicError> {
    let orders = [p, q, r];
    check_orders(orders)?;
    if !is_hyperbolic(orders) {
        return Err(HyperbolicError::NotHyperbolic(
            orders.map(|n| PI / n as f64),
        ));
    }
    let l = p.lcm(&q).lcm(&r);
    let n = 2 * l;
    let field = FieldDescriptor::cyclotomic(n)?;
    let half = field.from_rational(num_rational::BigRational::new(1.into(), 2.into()));
    let cos = |e: u32| -> CycElt {
        let s = i64::from(l / e);
        &(&field.gen_pow(s) + &field.gen_pow(-s)) * &half
    };
    let c = orders.map(cos);
    let squares: Vec<CycElt> = c.iter().map(|x| x * x).collect();
    let prod = &(&c[0] * &c[1]) * &c[2];
    let d = &(&(&(&squares[0] + &squares[1]) + &squares[2]) + &prod.scale_int(2)) - &field.one();
    let generators: Vec<&CycElt> = squares.iter().chain(std::iter::once(&prod)).collect();
    let units: Vec<u32> = (1..l).filter(|k| k.gcd(&n) == 1).collect();
    let mut fixing = 0usize;
    let mut seen: Vec<Vec<CycElt>> = vec![generators.iter().map(|&g| g.clone()).collect()];
    let mut others = Vec::new();
    let mut arithmetic = true;
    for &k in &units {
        let images: Vec<CycElt> = generators.iter().map(|g| g.galois(k)).collect();
        if images.iter().zip(&generators).all(|(a, &b)| a == b) {
            fixing += 1;
            continue;
        }
        if seen.contains(&images) {
            continue;
        }
        let dk = d.galois(k);
        let (value, err) = dk.embed_with_error(0);
        let negative = if dk.is_zero() {
            false
        } else if value.re.abs() > err {
            value.re < 0.0
        } else {
            return Err(HyperbolicError::Cyclotomic(CyclotomicError::Undecided(
                k as usize,
            )));
        };
        arithmetic &= negative;
        seen.push(images);
        others.push(EmbeddingValue { k, value: value.re });
    }
    Ok(TakeuchiReport {
        orders,
        arithmetic,
        conductor: n,
        trace_field_degree: units.len() / fixing,
        value_at_identity: d.embed(0).re,
        other_embeddings: others,
    })
}

/// The same criterion evaluated with integer congruences: `σ_k` fixes `cos²(π/e)`
/// iff `k ≡ ±1 (mod e)`, and then multiplies `cos(π/e)` by `(−1)^j` for
/// `k = ±1 + j e`. Signs are taken in floating point.
pub fn takeuchi_is_arithmetic_fast(p: u32, q: u32, r: u32) -> Option<bool> {
    let orders = [p, q, r];
    if orders.iter().any(|&n| n < 2) || !is_hyperbolic(orders) {
        return None;
    }
    let l = u64::from(p.lcm(&q).lcm(&r));
    let n = 2 * l;
    let has_two = orders.contains(&2);
    let d_at = |k: u64| -> f64 {
        let c: Vec<f64> = orders
            .iter()
            .map(|&e| (PI * (k % (2 * e as u64)) as f64 / e as f64).cos())
            .collect();
        c.iter().map(|x| x * x).sum::<f64>() + 2.0 * c[0] * c[1] * c[2] - 1.0
    };
    for k in (1..l).filter(|k| k.gcd(&n) == 1) {
        let mut fixes = true;
        let mut parity = 0u64;
        for &e in &orders {
            let e = u64::from(e);
            let m = k % e;
            if m == 1 % e {
                parity += (k - 1) / e;
            } else if (m + 1) % e == 0 {
                parity += (k + 1) / e;
            } else {
                fixes = false;
            }
        }
        if fixes && (has_two || parity.is_multiple_of(2)) {
            continue;
        }
        if d_at(k) >= -1e-12 {
            return Some(false);
        }
    }
    Some(true)
}
