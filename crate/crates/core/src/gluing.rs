//! The gluing relation on labelled real hyperbolic spaces: local models at a point
//! of the arrangement, orbit representatives for `⟨ζ_m⟩`, and lattice-level checks
//! of `(x, α) ∼ (y, β)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{
    enumerate_short_roots, hyperbolic_place, reflection_group, ArrangementError, ReflectionGroup,
    ShortRoot,
};
use crate::cyclotomic::{torsion_unit_group, CycElt};
use crate::hermitian::{HermitianError, HermitianLattice};
use crate::involutions::AntiUnitaryInvolution;
use crate::matrix::{proportional, CycMatrix, CycVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GluingError {
    #[error("invalid local model: {0}")]
    InvalidModel(String),
    #[error("t^m = {0} is not real")]
    NotInT(String),
    #[error("point is not fixed by the involution")]
    NotFixed,
    #[error("point does not lie in the ball")]
    NotNegative,
    #[error("root {0} does not pass through the point")]
    NotIncident(usize),
    #[error("incident roots are not maximal: a further root through the point exists")]
    NotMaximal,
    #[error("local gluing supports at most {max} incident hyperplanes, got {found}")]
    TooManyHyperplanes { found: usize, max: usize },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

impl From<HermitianError> for GluingError {
    fn from(e: HermitianError) -> Self {
        GluingError::Arrangement(e.into())
    }
}

/// A point of the arrangement with `a` pairs of complex-conjugate nodes and `b` real
/// nodes, in the ball `B^n(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModel {
    pub n: usize,
    pub m: u32,
    pub a: usize,
    pub b: usize,
}

impl LocalModel {
    pub fn new(n: usize, m: u32, a: usize, b: usize) -> Result<Self, GluingError> {
        if 2 * a + b > n {
            return Err(GluingError::InvalidModel(format!(
                "2a + b = {} exceeds n = {n}",
                2 * a + b
            )));
        }
        if m < 2 || !m.is_multiple_of(2) {
            return Err(GluingError::InvalidModel(format!(
                "m = {m} must be even and ≥ 2"
            )));
        }
        Ok(LocalModel { n, m, a, b })
    }

    pub fn k(&self) -> usize {
        2 * self.a + self.b
    }

    pub fn labels(&self) -> Vec<Vec<u32>> {
        labels(self.m, self.a + self.b)
    }

    pub fn involution(&self, label: &[u32]) -> LocalInvolution {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut exps = vec![0u32; n];
        for i in 0..self.a {
            perm[2 * i] = 2 * i + 1;
            perm[2 * i + 1] = 2 * i;
            exps[2 * i] = label[i] % self.m;
            exps[2 * i + 1] = label[i] % self.m;
        }
        for i in 0..self.b {
            exps[2 * self.a + i] = label[self.a + i] % self.m;
        }
        LocalInvolution {
            m: self.m,
            label: label.to_vec(),
            perm,
            exps,
        }
    }
}

fn labels(m: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|l| (0..m).map(move |j| [l.clone(), vec![j]].concat()))
            .collect();
    }
    out
}

/// `t ↦ (ζ^{e_c} · conj(t_{π(c)}))_c` with `ζ = e^{2πi/m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalInvolution {
    pub m: u32,
    pub label: Vec<u32>,
    pub perm: Vec<usize>,
    pub exps: Vec<u32>,
}

impl LocalInvolution {
    /// `β ∘ β` sends `t_c` to `ζ^{e_c − e_{π(c)}} t_{π(π(c))}`; this is the identity
    /// exactly when `π² = 1` and `e` is constant on `π`-orbits.
    pub fn squares_to_identity(&self) -> bool {
        (0..self.perm.len())
            .all(|c| self.perm[self.perm[c]] == c && self.exps[c] == self.exps[self.perm[c]])
    }

    pub fn apply(&self, t: &[Complex64]) -> Vec<Complex64> {
        let z = Complex64::from_polar(1.0, 2.0 * PI / self.m as f64);
        (0..t.len())
            .map(|c| z.powu(self.exps[c]) * t[self.perm[c]].conj())
            .collect()
    }

    /// The linear map `β' ∘ β` as `(permutation, exponents)`: `t_c ↦ ζ^{d_c} t_{σ(c)}`.
    pub fn compose(&self, other: &LocalInvolution) -> (Vec<usize>, Vec<u32>) {
        let m = self.m;
        let n = self.perm.len();
        // other(self(t))_c = ζ^{o_c} conj(ζ^{s_{π'c}} conj(t_{π π' c}))
        let perm = (0..n).map(|c| self.perm[other.perm[c]]).collect();
        let exps = (0..n)
            .map(|c| (other.exps[c] + m - self.exps[other.perm[c]]) % m)
            .collect();
        (perm, exps)
    }

    /// Real `2n × 2n` matrix of the map on `R^{2n} = C^n` (real and imaginary parts).
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let n = self.perm.len();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        for c in 0..n {
            let th = 2.0 * PI * self.exps[c] as f64 / self.m as f64;
            let (s, co) = th.sin_cos();
            let p = self.perm[c];
            // (co + i s)(x − i y) = (co x + s y) + i (s x − co y)
            a[(2 * c, 2 * p)] = co;
            a[(2 * c, 2 * p + 1)] = s;
            a[(2 * c + 1, 2 * p)] = s;
            a[(2 * c + 1, 2 * p + 1)] = -co;
        }
        a
    }
}

/// The `m^{a+b}` involutions at the centre of the local model.
pub fn involutions_at_center(model: &LocalModel) -> Vec<LocalInvolution> {
    model.labels().iter().map(|l| model.involution(l)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub copies: usize,
    /// Real dimension of the common part → number of unordered pairs of copies.
    pub pairwise_intersection_dims: BTreeMap<usize, usize>,
}

/// Real dimension of `Fix(α_j) ∩ Fix(α_{j'})`: each pair slot contributes 2 if the
/// labels agree and 0 otherwise; each real-node and smooth coordinate contributes 1.
pub fn intersection_dimension(model: &LocalModel, j: &[u32], jp: &[u32]) -> usize {
    let c = (0..model.a)
        .filter(|&i| j[i] % model.m == jp[i] % model.m)
        .count();
    2 * c + (model.n - 2 * model.a)
}

/// `B_f \ Y_f`: real-node labels are collapsed, leaving `m^a` copies of `B^n(R)`.
pub fn components_mod_bf(model: &LocalModel) -> ComponentReport {
    let pair_labels = labels(model.m, model.a);
    let pad = |l: &[u32]| [l.to_vec(), vec![0; model.b]].concat();
    let mut dims = BTreeMap::new();
    for (i, x) in pair_labels.iter().enumerate() {
        for y in &pair_labels[i + 1..] {
            *dims
                .entry(intersection_dimension(model, &pad(x), &pad(y)))
                .or_insert(0) += 1;
        }
    }
    ComponentReport {
        copies: pair_labels.len(),
        pairwise_intersection_dims: dims,
    }
}

fn numeric_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// `dim_R Fix(β) ∩ Fix(β')` from the rank of the stacked real matrices.
pub fn intersection_dimension_numeric(beta: &LocalInvolution, other: &LocalInvolution) -> usize {
    let a = beta.real_matrix();
    let b = other.real_matrix();
    let n2 = a.nrows();
    let id = DMatrix::<f64>::identity(n2, n2);
    let mut stacked = DMatrix::zeros(2 * n2, n2);
    stacked.view_mut((0, 0), (n2, n2)).copy_from(&(a - &id));
    stacked.view_mut((n2, 0), (n2, n2)).copy_from(&(b - &id));
    n2 - numeric_rank(&stacked, 1e-9)
}

/// Orbit representative of `t ∈ T = {t : t^m ∈ R}` under `⟨ζ_m⟩`: the unique
/// `ζ_{2^{e+1}}^ε · r` with `r ≥ 0`, `ε ∈ {0, 1}`, where `2^e ∥ m`.
pub fn tg_representative(t: Complex64, m: u32) -> Result<(u8, f64), GluingError> {
    let r = t.norm();
    if r == 0.0 {
        return Ok((0, 0.0));
    }
    let tm = (t / r).powu(m);
    if tm.im.abs() > 1e-10 {
        return Err(GluingError::NotInT(format!("{tm}")));
    }
    // arg t = lπ/m; multiplication by ζ_m shifts l by 2
    let l = (t.arg() * m as f64 / PI).round() as i64;
    Ok((l.rem_euclid(2) as u8, r))
}

/// Brute-force uniqueness: representatives of the form `ζ_{2^{e+1}}^ε r` in the orbit.
pub fn tg_orbit_representatives(t: Complex64, m: u32) -> Vec<(u8, f64)> {
    let e = m.trailing_zeros();
    let w = Complex64::from_polar(1.0, PI / (1u32 << e) as f64);
    let z = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
    let scale = t.norm().max(1.0);
    let mut out = Vec::new();
    for k in 0..m {
        let s = t * z.powu(k);
        for (eps, base) in [(0u8, Complex64::new(1.0, 0.0)), (1u8, w)] {
            let r = s / base;
            if r.im.abs() <= 1e-10 * scale && r.re >= -1e-10 * scale {
                out.push((eps, r.re.max(0.0)));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| a.0 == b.0 && (a.1 - b.1).abs() <= 1e-9 * scale);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomainReport {
    pub samples: usize,
    pub max_error: f64,
    pub pass: bool,
}

/// Sampling check that `U = ∪ K_{f,ε}` is a fundamental domain for `B_f` on
/// `Y_f = {t : t_1^m, …, t_k^m, t_{k+1}, …, t_n ∈ R}` (only real nodes), and that
/// `t ↦ (−ζ_{2^{e+1}})^{−ε} t` maps `U` bijectively onto `B^n(R)`.
pub fn fundamental_domain_check(
    n: usize,
    m: u32,
    k: usize,
    samples: usize,
    seed: u64,
) -> FundamentalDomainReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = m.trailing_zeros();
    let w = Complex64::from_polar(1.0, PI / (1u32 << e) as f64);
    let z = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
    let mut max_error: f64 = 0.0;
    let mut images: Vec<(Vec<f64>, Vec<i64>)> = Vec::new();
    for _ in 0..samples {
        // a point of U in the unit ball, then a random B_f-translate of it
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let shrink = rng.random_range(0.05..0.95) / norm.max(1e-12);
        x.iter_mut().for_each(|v| *v *= shrink);
        let eps: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
        let shifts: Vec<u32> = (0..k).map(|_| rng.random_range(0..m)).collect();
        let t: Vec<Complex64> = (0..n)
            .map(|c| {
                if c < k {
                    z.powu(shifts[c]) * w.powu(eps[c] as u32) * x[c].abs()
                } else {
                    Complex64::new(x[c], 0.0)
                }
            })
            .collect();
        // fold back into U and map to the real ball
        let mut img = Vec::with_capacity(n);
        for c in 0..n {
            if c < k {
                let (ep, r) = tg_representative(t[c], m).expect("point of T");
                max_error = max_error.max((ep as i64 - eps[c] as i64).abs() as f64);
                let u = w.powu(ep as u32) * r;
                let v = (-w).powu(ep as u32).inv() * u;
                max_error = max_error.max(v.im.abs());
                img.push(v.re);
            } else {
                img.push(t[c].re);
            }
        }
        let expected: Vec<f64> = (0..n)
            .map(|c| {
                if c < k {
                    x[c].abs() * if eps[c] == 1 { -1.0 } else { 1.0 }
                } else {
                    x[c]
                }
            })
            .collect();
        for (a, b) in img.iter().zip(&expected) {
            max_error = max_error.max((a - b).abs());
        }
        let key = img.iter().map(|v| (v * 1e7).round() as i64).collect();
        images.push((img, key));
    }
    // injectivity on B_f-orbits: distinct samples have distinct images
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut collisions = 0;
    for (i, (_, key)) in images.iter().enumerate() {
        if seen.insert(key.clone(), i).is_some() {
            collisions += 1;
        }
    }
    FundamentalDomainReport {
        samples,
        max_error,
        pass: max_error < 1e-9 && collisions == 0,
    }
}

/// Relation among the involutions at the centre seen from a point that lies on the
/// hyperplanes in `support` (indices of coordinates `< k`): `α ∼ β` iff `β ∘ α` is a
/// product of reflections in those hyperplanes.
pub fn locally_equivalent(
    model: &LocalModel,
    support: &[bool],
    alpha: &LocalInvolution,
    beta: &LocalInvolution,
) -> bool {
    let (perm, exps) = alpha.compose(beta);
    (0..model.n).all(|c| perm[c] == c && (exps[c] == 0 || (c < model.k() && support[c])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub labels: usize,
    pub supports: usize,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    /// Number of classes for each support pattern (`1` where a hyperplane is incident).
    pub classes: BTreeMap<String, usize>,
    pub counterexamples: usize,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive && self.counterexamples == 0
    }
}

/// Incidence patterns of points fixed by an involution: both hyperplanes of a
/// conjugate pair, or neither, and any subset of the real nodes.
fn supports(model: &LocalModel) -> Vec<Vec<bool>> {
    let slots = model.a + model.b;
    (0..1usize << slots)
        .map(|mask| {
            let mut s = vec![false; model.k()];
            for i in 0..model.a {
                if mask >> i & 1 == 1 {
                    s[2 * i] = true;
                    s[2 * i + 1] = true;
                }
            }
            for i in 0..model.b {
                if mask >> (model.a + i) & 1 == 1 {
                    s[2 * model.a + i] = true;
                }
            }
            s
        })
        .collect()
}

/// Exhaustive check that the local gluing relation is an equivalence relation on the
/// involutions at the centre, for every incidence pattern.
pub fn equivalence_relation_bruteforce(
    model: &LocalModel,
) -> Result<EquivalenceReport, GluingError> {
    if model.k() > 2 {
        return Err(GluingError::TooManyHyperplanes {
            found: model.k(),
            max: 2,
        });
    }
    let invs = involutions_at_center(model);
    let sups = supports(model);
    let results: Vec<(bool, bool, bool, usize, String)> = sups
        .par_iter()
        .map(|s| {
            let n = invs.len();
            let rel: Vec<Vec<bool>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| locally_equivalent(model, s, &invs[i], &invs[j]))
                        .collect()
                })
                .collect();
            let refl = (0..n).all(|i| rel[i][i]);
            let sym = (0..n).all(|i| (0..n).all(|j| rel[i][j] == rel[j][i]));
            let mut trans = true;
            for i in 0..n {
                for j in (0..n).filter(|&j| rel[i][j]) {
                    if !(0..n).all(|k| !rel[j][k] || rel[i][k]) {
                        trans = false;
                    }
                }
            }
            let mut class_of = vec![usize::MAX; n];
            let mut classes = 0;
            for i in 0..n {
                if class_of[i] == usize::MAX {
                    for j in 0..n {
                        if rel[i][j] {
                            class_of[j] = classes;
                        }
                    }
                    classes += 1;
                }
            }
            let pattern: String = s.iter().map(|&b| if b { '1' } else { '0' }).collect();
            (refl, sym, trans, classes, pattern)
        })
        .collect();
    let mut classes = BTreeMap::new();
    let mut counterexamples = 0;
    for (r, s, t, c, p) in &results {
        counterexamples += [r, s, t].iter().filter(|x| !***x).count();
        classes.insert(
            if p.is_empty() {
                "-".to_string()
            } else {
                p.clone()
            },
            *c,
        );
    }
    Ok(EquivalenceReport {
        labels: invs.len(),
        supports: sups.len(),
        reflexive: results.iter().all(|r| r.0),
        symmetric: results.iter().all(|r| r.1),
        transitive: results.iter().all(|r| r.2),
        classes,
        counterexamples,
    })
}

/// A point of `CH^n` together with an anti-unitary involution fixing it.
#[derive(Clone, Debug)]
pub struct LabeledPoint {
    pub x: CycVector,
    pub alpha: AntiUnitaryInvolution,
}

impl LabeledPoint {
    pub fn new(x: CycVector, alpha: AntiUnitaryInvolution) -> Result<Self, GluingError> {
        if proportional(&x, &alpha.apply(&x)).is_none() {
            return Err(GluingError::NotFixed);
        }
        Ok(LabeledPoint { x, alpha })
    }
}

/// Lattice-level gluing data: the hermitian lattice and a bounded root enumeration
/// used to certify maximality of incident root sets.
pub struct GluingContext {
    lattice: HermitianLattice,
    place: usize,
    reference_roots: Vec<ShortRoot>,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueVerdict {
    pub equivalent: bool,
    pub group_order: usize,
    /// Index into the group of `β ∘ α^{-1}` (up to a root of unity), if it lies there.
    pub element: Option<usize>,
    pub warning: Option<String>,
}

impl GluingContext {
    pub fn new(lattice: HermitianLattice, bound: i64) -> Result<Self, GluingError> {
        let place = hyperbolic_place(&lattice)?;
        let reference_roots = enumerate_short_roots(&lattice, bound)?;
        Ok(GluingContext {
            lattice,
            place,
            reference_roots,
            bound,
        })
    }

    pub fn lattice(&self) -> &HermitianLattice {
        &self.lattice
    }

    pub fn is_negative(&self, x: &[CycElt]) -> Result<bool, GluingError> {
        let s = self
            .lattice
            .norm(x)
            .sign_at(self.place)
            .map_err(HermitianError::from)?;
        Ok(s == std::cmp::Ordering::Less)
    }

    /// All enumerated roots whose hyperplane passes through `x`.
    pub fn roots_through(&self, x: &[CycElt]) -> Vec<ShortRoot> {
        self.reference_roots
            .iter()
            .filter(|r| self.lattice.form(x, r.vector()).is_zero())
            .cloned()
            .collect()
    }

    fn check_incident(&self, x: &[CycElt], roots: &[ShortRoot]) -> Result<(), GluingError> {
        if roots.len() > 2 {
            return Err(GluingError::TooManyHyperplanes {
                found: roots.len(),
                max: 2,
            });
        }
        for (i, r) in roots.iter().enumerate() {
            if !self.lattice.form(x, r.vector()).is_zero() {
                return Err(GluingError::NotIncident(i));
            }
        }
        let through = self.roots_through(x);
        let covered = |t: &ShortRoot| {
            roots
                .iter()
                .any(|r| proportional(r.vector(), t.vector()).is_some())
        };
        if !through.iter().all(covered) {
            return Err(GluingError::NotMaximal);
        }
        Ok(())
    }

    fn group(&self, roots: &[ShortRoot]) -> Result<ReflectionGroup, GluingError> {
        Ok(reflection_group(&self.lattice, roots)?)
    }

    /// `(x, α) ∼ (y, β)` iff `x = y` as lines and `β = φ ∘ α` in `PΓ` with `φ ∈ G(r)`.
    pub fn glue_equivalent(
        &self,
        p: &LabeledPoint,
        q: &LabeledPoint,
        incident: &[ShortRoot],
    ) -> Result<GlueVerdict, GluingError> {
        if !self.is_negative(&p.x)? {
            return Err(GluingError::NotNegative);
        }
        self.check_incident(&p.x, incident)?;
        let group = self.group(incident)?;
        let warning = Some(format!(
            "maximality certified against roots with coefficients bounded by {}",
            self.bound
        ));
        if proportional(&p.x, &q.x).is_none() {
            return Ok(GlueVerdict {
                equivalent: false,
                group_order: group.order(),
                element: None,
                warning,
            });
        }
        // β = φ ∘ α with α(x) = Aσ(x), β(x) = Bσ(x) gives φ = B σ(A)
        let phi = q.alpha.matrix() * &p.alpha.matrix().conjugate();
        let element = projective_index(&group, &phi);
        Ok(GlueVerdict {
            equivalent: element.is_some(),
            group_order: group.order(),
            element,
            warning,
        })
    }

    /// For sample points fixed by both `α` and `β`, whether `(y, α) ∼ (y, β)` with the
    /// maximal root set at `y`. Returns `None` when no sample is a common fixed point.
    pub fn shared_locus_check(
        &self,
        alpha: &AntiUnitaryInvolution,
        beta: &AntiUnitaryInvolution,
        samples: &[CycVector],
    ) -> Result<SharedLocusReport, GluingError> {
        let mut checked = 0;
        let mut all = true;
        for y in samples {
            let fixed_a = proportional(y, &alpha.apply(y)).is_some();
            let fixed_b = proportional(y, &beta.apply(y)).is_some();
            if !fixed_a || !fixed_b || !self.is_negative(y)? {
                continue;
            }
            let roots = self.roots_through(y);
            if roots.len() > 2 {
                return Err(GluingError::TooManyHyperplanes {
                    found: roots.len(),
                    max: 2,
                });
            }
            let p = LabeledPoint::new(y.clone(), alpha.clone())?;
            let q = LabeledPoint::new(y.clone(), beta.clone())?;
            checked += 1;
            all &= self.glue_equivalent(&p, &q, &roots)?.equivalent;
        }
        let warning =
            (checked == 0).then(|| "no sample is a common fixed point; vacuous pass".to_string());
        Ok(SharedLocusReport {
            checked,
            equivalent: all,
            warning,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedLocusReport {
    pub checked: usize,
    pub equivalent: bool,
    pub warning: Option<String>,
}

/// Position of `u·φ` in the group for some root of unity `u`.
fn projective_index(group: &ReflectionGroup, phi: &CycMatrix) -> Option<usize> {
    let field = phi.field();
    let (m, z) = torsion_unit_group(field);
    let mut u = field.one();
    for _ in 0..m {
        if let Some(i) = group.index_of(&phi.scale(&u)) {
            return Some(i);
        }
        u = &u * &z;
    }
    None
}

/// Every element of `G(r)` that acts trivially on `H_{r_i}` (as a map of lines) is a
/// power of `h_{r_i}`.
pub fn reflection_orders_check(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
) -> Result<bool, GluingError> {
    let group = reflection_group(lattice, roots)?;
    let n = lattice.rank();
    for (i, r) in roots.iter().enumerate() {
        let perp = orthogonal_basis(lattice, r.vector());
        debug_assert_eq!(perp.len(), n - 1);
        for (g, exps) in group.elements.iter().zip(&group.exponents) {
            let images: Vec<CycVector> = perp.iter().map(|v| g.apply(v)).collect();
            // scalar on r^⊥: g v = c v for one common c
            let c = proportional(&perp[0], &images[0]);
            let trivial = c.as_ref().is_some_and(|c| {
                perp.iter()
                    .zip(&images)
                    .all(|(v, w)| v.iter().map(|x| x * c).collect::<Vec<_>>() == *w)
            });
            let is_power = exps.iter().enumerate().all(|(k, &e)| k == i || e == 0);
            if trivial && !is_power {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A basis of `r^⊥ = {x : 𝔥(x, r) = 0}`.
fn orthogonal_basis(lattice: &HermitianLattice, r: &[CycElt]) -> Vec<CycVector> {
    let field = lattice.field();
    let n = lattice.rank();
    // 𝔥(x, r) = Σ x_i w_i with w = G σ(r)
    let w = lattice.gram().apply(&crate::matrix::vec_conjugate(r));
    let p = w.iter().position(|c| !c.is_zero()).expect("nonzero root");
    let winv = w[p].inverse().unwrap();
    (0..n)
        .filter(|&i| i != p)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v[p] = -(&w[i] * &winv);
            v
        })
        .collect()
}

pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex number in `T = {t : t^m ∈ R}`.
pub fn random_t(rng: &mut impl Rng, m: u32) -> Complex64 {
    let l = rng.random_range(0..2 * m);
    Complex64::from_polar(rng.random_range(0.0..5.0), l as f64 * PI / m as f64)
}
