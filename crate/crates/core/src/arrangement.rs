//! Short roots of a hermitian lattice, the hyperplanes they cut out in the complex
//! ball, `ζ^i`-reflections, the abelian groups `G(r)` and Condition (*).

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{torsion_unit_group, CycElt, RealElt};
use crate::golden::ZLambda;
use crate::hermitian::{signature, HermitianError, HermitianLattice};
use crate::matrix::{proportional, unit_vector, vec_conjugate, CycMatrix, CycVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("vector has norm {0}, not 1")]
    NotShortRoot(String),
    #[error("short-root enumeration needs a diagonal gram over Q(ζ_5) definite at some place")]
    UnsupportedLattice,
    #[error("the form is not hyperbolic at exactly one place")]
    NotHyperbolic,
    #[error("roots {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("roots {0} and {1} define the same hyperplane")]
    Repeated(usize, usize),
    #[error("{0} roots exceed rank − 1")]
    TooManyRoots(usize),
    #[error("Condition (*) fails for roots {r:?} and {t:?}")]
    ConditionStar {
        r: Vec<String>,
        t: Vec<String>,
        report: Box<ConditionStarReport>,
    },
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { found: usize, expected: usize },
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

/// A vector `r ∈ Λ` with `𝔥(r, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShortRoot {
    vector: CycVector,
}

impl ShortRoot {
    pub fn new(lattice: &HermitianLattice, vector: CycVector) -> Result<Self, ArrangementError> {
        let n = lattice.form(&vector, &vector);
        if !n.is_one() || !vector.iter().all(|c| c.is_integral()) {
            return Err(ArrangementError::NotShortRoot(n.to_string()));
        }
        Ok(ShortRoot { vector })
    }

    pub fn vector(&self) -> &[CycElt] {
        &self.vector
    }

    /// The representative of `μ_K·r` with the smallest coefficient tuple.
    pub fn canonical(&self) -> ShortRoot {
        let field = self.vector[0].field().clone();
        let (m, z) = torsion_unit_group(&field);
        let mut best: Option<(Vec<i64>, CycVector)> = None;
        let mut u = field.one();
        for _ in 0..m {
            let v: CycVector = self.vector.iter().map(|c| c * &u).collect();
            let key = coefficient_key(&v);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, v));
            }
            u = &u * &z;
        }
        ShortRoot {
            vector: best.unwrap().1,
        }
    }

    pub fn key(&self) -> Vec<i64> {
        coefficient_key(&self.vector)
    }
}

fn coefficient_key(v: &[CycElt]) -> Vec<i64> {
    v.iter()
        .flat_map(|c| c.i64_coeffs().expect("short roots are integral and small"))
        .collect()
}

/// `H_r = {x : 𝔥(x, r) = 0}` stored by its canonical root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    root: ShortRoot,
}

impl Hyperplane {
    pub fn new(root: &ShortRoot) -> Self {
        Hyperplane {
            root: root.canonical(),
        }
    }

    pub fn root(&self) -> &ShortRoot {
        &self.root
    }

    pub fn contains(&self, lattice: &HermitianLattice, x: &[CycElt]) -> bool {
        lattice.form(x, self.root.vector()).is_zero()
    }
}

/// `h_r^i(x) = x − (1 − ζ^i) 𝔥(x, r)/𝔥(r, r) · r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub root: ShortRoot,
    pub exponent: u32,
    pub order: u32,
    pub matrix: CycMatrix,
    /// Set when `i ≡ 0 mod m`, in which case the matrix is the identity.
    pub trivial: bool,
}

pub fn reflection(lattice: &HermitianLattice, r: &ShortRoot, i: i64) -> Reflection {
    let field = lattice.field();
    let (m, z) = torsion_unit_group(field);
    let i = i.rem_euclid(m as i64) as u32;
    let n = lattice.rank();
    let zi = z.pow(i);
    let c = &field.one() - &zi;
    // 𝔥(x, r) = xᵀ (G σ(r)); the matrix is I − c · r (Gσ(r))ᵀ
    let gr = lattice.gram().apply(&vec_conjugate(r.vector()));
    let mut mat = CycMatrix::identity(field, n);
    if i != 0 {
        for a in 0..n {
            let cr = &c * &r.vector()[a];
            for b in 0..n {
                let t = &cr * &gr[b];
                mat[(a, b)] -= &t;
            }
        }
    }
    let order = if i == 0 {
        1
    } else {
        m / num_integer::gcd(i, m)
    };
    Reflection {
        root: r.clone(),
        exponent: i,
        order,
        matrix: mat,
        trivial: i == 0,
    }
}

/// The unique place where `𝔥` is indefinite.
pub fn hyperbolic_place(lattice: &HermitianLattice) -> Result<usize, ArrangementError> {
    let sig = signature(lattice)?;
    let places: Vec<usize> = sig
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.r > 0 && e.s > 0)
        .map(|(p, _)| p)
        .collect();
    match places.as_slice() {
        [p] => Ok(*p),
        _ => Err(ArrangementError::NotHyperbolic),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    OrthogonalIntersecting,
    IntersectingNonorthogonal,
    DisjointOrBoundary,
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::OrthogonalIntersecting => "orthogonal_intersecting",
            Relation::IntersectingNonorthogonal => "intersecting_nonorthogonal",
            Relation::DisjointOrBoundary => "disjoint_or_boundary",
        }
    }
}

/// Whether `c` is a root of unity of `K`.
fn is_torsion(c: &CycElt) -> bool {
    let (m, _) = torsion_unit_group(c.field());
    c.pow(m).is_one()
}

/// Relative position of `H_r` and `H_t` in the ball: the span of two norm-one roots is
/// positive definite at the hyperbolic place iff `1 − |𝔥(r, t)|² > 0` there.
pub fn hyperplane_relation(
    lattice: &HermitianLattice,
    place: usize,
    r: &ShortRoot,
    t: &ShortRoot,
) -> Result<Relation, ArrangementError> {
    if proportional(r.vector(), t.vector()).is_some_and(|c| is_torsion(&c)) {
        return Ok(Relation::Equal);
    }
    let n = lattice.form(r.vector(), t.vector());
    let gap = RealElt::new(&lattice.field().one() - &n.norm_to_real()).expect("real");
    let sign = gap.sign_at(place).map_err(HermitianError::from)?;
    Ok(match sign {
        Ordering::Greater if n.is_zero() => Relation::OrthogonalIntersecting,
        Ordering::Greater => Relation::IntersectingNonorthogonal,
        _ => Relation::DisjointOrBoundary,
    })
}

/// Norm `c σ(c)` of every coefficient vector in the box, as an element of `Z[λ]`.
fn box_elements(lattice: &HermitianLattice, bound: i64) -> Vec<(CycElt, ZLambda)> {
    let field = lattice.field();
    let d = field.degree();
    let side = (2 * bound + 1) as usize;
    let total = side.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut cs = vec![0i64; d];
            for c in cs.iter_mut() {
                *c = (idx % side) as i64 - bound;
                idx /= side;
            }
            let x = CycElt::from_ints(field, &cs);
            let nx = ZLambda::from_elt(&x.norm_to_real()).expect("integral real norm");
            (x, nx)
        })
        .collect()
}

/// All short roots with power-basis coefficients in `[−bound, bound]`, up to `μ_K`,
/// sorted by canonical coefficient tuple. `bound = 0` returns the standard basis
/// vectors of norm one.
pub fn enumerate_short_roots(
    lattice: &HermitianLattice,
    bound: i64,
) -> Result<Vec<ShortRoot>, ArrangementError> {
    let field = lattice.field();
    let n = lattice.rank();
    if bound <= 0 {
        return Ok((0..n)
            .filter_map(|i| ShortRoot::new(lattice, unit_vector(field, n, i)).ok())
            .map(|r| r.canonical())
            .collect());
    }
    let g = lattice.gram();
    let diag: Option<Vec<ZLambda>> = (0..n)
        .map(|i| {
            let off_diag_zero = (0..n).all(|j| i == j || g[(i, j)].is_zero());
            if off_diag_zero {
                ZLambda::from_elt(&g[(i, i)])
            } else {
                None
            }
        })
        .collect();
    let diag = match diag {
        Some(d) if field.is_quintic() => d,
        _ => return Err(ArrangementError::UnsupportedLattice),
    };
    let Some(place) = (0..2).find(|&p| diag.iter().all(|x| x.value_at(p) > 0.0)) else {
        return Err(ArrangementError::UnsupportedLattice);
    };
    let elems = box_elements(lattice, bound);
    let eps = 1e-9;
    // per coordinate: candidates whose contribution at the definite place is ≤ 1
    let cands: Vec<Vec<(usize, ZLambda, f64)>> = diag
        .iter()
        .map(|gi| {
            elems
                .iter()
                .enumerate()
                .filter_map(|(k, (_, nx))| {
                    let c = *gi * *nx;
                    let v = c.value_at(place);
                    (v <= 1.0 + eps).then_some((k, c, v))
                })
                .collect()
        })
        .collect();
    // last coordinate bucketed by its exact contribution
    let mut last: HashMap<ZLambda, Vec<usize>> = HashMap::new();
    for &(k, c, _) in &cands[n - 1] {
        last.entry(c).or_default().push(k);
    }
    let prefixes = prefix_combinations(&cands[..n - 1], place, eps);
    let mut found: Vec<ShortRoot> = prefixes
        .par_iter()
        .flat_map_iter(|(idx, sum)| {
            let need = ZLambda::ONE - *sum;
            last.get(&need)
                .into_iter()
                .flatten()
                .map(|&k| {
                    let mut v: CycVector = idx.iter().map(|&i| elems[i].0.clone()).collect();
                    v.push(elems[k].0.clone());
                    ShortRoot { vector: v }.canonical()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    found.par_sort_by_cached_key(|r| r.key());
    found.dedup();
    Ok(found)
}

/// Index tuples for all but the last coordinate whose partial sums stay ≤ 1 at the
/// definite place.
fn prefix_combinations(
    cands: &[Vec<(usize, ZLambda, f64)>],
    place: usize,
    eps: f64,
) -> Vec<(Vec<usize>, ZLambda)> {
    let mut acc: Vec<(Vec<usize>, ZLambda)> = vec![(Vec::new(), ZLambda::ZERO)];
    for coord in cands {
        acc = acc
            .into_iter()
            .flat_map(|(idx, s)| {
                coord.iter().filter_map(move |&(k, c, _)| {
                    let t = s + c;
                    (t.value_at(place) <= 1.0 + eps).then(|| {
                        let mut i = idx.clone();
                        i.push(k);
                        (i, t)
                    })
                })
            })
            .collect();
    }
    acc
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCounts {
    pub equal: usize,
    pub orthogonal_intersecting: usize,
    pub intersecting_nonorthogonal: usize,
    pub disjoint_or_boundary: usize,
}

impl RelationCounts {
    fn add(&mut self, r: Relation) {
        match r {
            Relation::Equal => self.equal += 1,
            Relation::OrthogonalIntersecting => self.orthogonal_intersecting += 1,
            Relation::IntersectingNonorthogonal => self.intersecting_nonorthogonal += 1,
            Relation::DisjointOrBoundary => self.disjoint_or_boundary += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.equal
            + self.orthogonal_intersecting
            + self.intersecting_nonorthogonal
            + self.disjoint_or_boundary
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStarReport {
    pub roots: usize,
    pub pairs: usize,
    pub relations: RelationCounts,
    /// Index pairs of distinct intersecting hyperplanes that are not orthogonal.
    pub violations: Vec<(usize, usize)>,
}

impl ConditionStarReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `Z[ζ_5]` in the redundant basis `1, ζ, …, ζ^4` of `Z[x]/(x^5 − 1)`.
type Z5 = [i64; 5];

fn z5_from(x: &CycElt) -> Option<Z5> {
    let c = x.i64_coeffs()?;
    Some([c[0], c[1], c[2], c[3], 0])
}

fn z5_mul(a: &Z5, b: &Z5) -> Z5 {
    let mut out = [0i64; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[(i + j) % 5] += a[i] * b[j];
        }
    }
    out
}

fn z5_conj(a: &Z5) -> Z5 {
    [a[0], a[4], a[3], a[2], a[1]]
}

/// Coordinates in the power basis `1, ζ, ζ², ζ³`.
fn z5_reduce(a: &Z5) -> [i64; 4] {
    [a[0] - a[4], a[1] - a[4], a[2] - a[4], a[3] - a[4]]
}

/// Sign of `a + bλ` at a real place of `Q(√5)`, exactly.
fn golden_sign(a: i64, b: i64, place: usize) -> Ordering {
    // 2(a + bλ) = (2a − b) ± b√5
    let p = 2 * a as i128 - b as i128;
    let q = if place == 0 { b as i128 } else { -(b as i128) };
    let sp = p.signum();
    let sq = q.signum();
    if sp == sq || sq == 0 {
        return sp.cmp(&0);
    }
    if sp == 0 {
        return sq.cmp(&0);
    }
    // opposite signs: compare p² with 5q²
    let ord = (p * p).cmp(&(5 * q * q));
    if sp > 0 {
        ord
    } else {
        ord.reverse()
    }
}

/// Machine-integer version of [`hyperplane_relation`] for quintic lattices.
struct FastQuintic {
    roots: Vec<Vec<Z5>>,
    dual: Vec<Vec<Z5>>,
}

impl FastQuintic {
    fn new(lattice: &HermitianLattice, roots: &[ShortRoot]) -> Option<Self> {
        if !lattice.field().is_quintic() {
            return None;
        }
        let small = |x: &CycElt| {
            x.i64_coeffs()
                .is_some_and(|c| c.iter().all(|v| v.abs() < 1 << 12))
        };
        if !roots.iter().all(|r| r.vector().iter().all(small))
            || !lattice.gram().to_rows().iter().flatten().all(small)
        {
            return None;
        }
        let g: Vec<Vec<Z5>> = lattice
            .gram()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| z5_from(x).unwrap()).collect())
            .collect();
        let rs: Vec<Vec<Z5>> = roots
            .iter()
            .map(|r| r.vector().iter().map(|x| z5_from(x).unwrap()).collect())
            .collect();
        let dual = rs
            .iter()
            .map(|t| {
                let ct: Vec<Z5> = t.iter().map(z5_conj).collect();
                g.iter()
                    .map(|row| {
                        row.iter().zip(&ct).fold([0i64; 5], |mut acc, (gij, tj)| {
                            let p = z5_mul(gij, tj);
                            for k in 0..5 {
                                acc[k] += p[k];
                            }
                            acc
                        })
                    })
                    .collect()
            })
            .collect();
        Some(FastQuintic { roots: rs, dual })
    }

    /// `None` when the pair needs the exact proportionality test.
    fn relation(&self, place: usize, i: usize, j: usize) -> Option<Relation> {
        let mut n = [0i64; 5];
        for (a, b) in self.roots[i].iter().zip(&self.dual[j]) {
            let p = z5_mul(a, b);
            for k in 0..5 {
                n[k] += p[k];
            }
        }
        if z5_reduce(&n) == [0; 4] {
            return Some(Relation::OrthogonalIntersecting);
        }
        let nn = z5_reduce(&z5_mul(&n, &z5_conj(&n)));
        // real element c0 + c1ζ + c2ζ² + c3ζ³ = u + vλ with u = c0 − c2, v = −c2
        let (u, v) = (nn[0] - nn[2], -nn[2]);
        match golden_sign(1 - u, -v, place) {
            Ordering::Greater => Some(Relation::IntersectingNonorthogonal),
            Ordering::Equal => None,
            Ordering::Less => Some(Relation::DisjointOrBoundary),
        }
    }
}

/// Checks that distinct hyperplanes meeting in the ball are orthogonal, over all
/// unordered pairs of the given roots.
pub fn condition_star_report(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
) -> Result<ConditionStarReport, ArrangementError> {
    if roots.is_empty() {
        return Ok(ConditionStarReport {
            roots: 0,
            pairs: 0,
            relations: RelationCounts::default(),
            violations: vec![],
        });
    }
    let place = hyperbolic_place(lattice)?;
    let fast = FastQuintic::new(lattice, roots);
    let rels: Vec<Vec<Relation>> = (0..roots.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..roots.len())
                .map(
                    |j| match fast.as_ref().and_then(|f| f.relation(place, i, j)) {
                        Some(r) => Ok(r),
                        None => hyperplane_relation(lattice, place, &roots[i], &roots[j]),
                    },
                )
                .collect()
        })
        .collect::<Vec<Result<Vec<_>, _>>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut counts = RelationCounts::default();
    let mut violations = Vec::new();
    for (i, row) in rels.iter().enumerate() {
        for (off, &r) in row.iter().enumerate() {
            counts.add(r);
            if r == Relation::IntersectingNonorthogonal {
                violations.push((i, i + 1 + off));
            }
        }
    }
    Ok(ConditionStarReport {
        roots: roots.len(),
        pairs: counts.total(),
        relations: counts,
        violations,
    })
}

/// Like [`condition_star_report`] but fails on the first violation.
pub fn verify_condition_star(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
) -> Result<ConditionStarReport, ArrangementError> {
    let report = condition_star_report(lattice, roots)?;
    if let Some(&(i, j)) = report.violations.first() {
        let show = |r: &ShortRoot| r.vector().iter().map(|c| c.to_string()).collect();
        return Err(ArrangementError::ConditionStar {
            r: show(&roots[i]),
            t: show(&roots[j]),
            report: Box::new(report),
        });
    }
    Ok(report)
}

/// `G(r) = ⟨h_{r_1}, …, h_{r_k}⟩ ≅ (Z/m)^k` with its multiplication table.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    pub roots: Vec<ShortRoot>,
    pub m: u32,
    /// Exponent vectors `(j_1, …, j_k)`, in lexicographic order.
    pub exponents: Vec<Vec<u32>>,
    pub elements: Vec<CycMatrix>,
    pub table: Vec<Vec<usize>>,
}

impl ReflectionGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &CycMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    pub fn contains(&self, g: &CycMatrix) -> bool {
        self.index_of(g).is_some()
    }

    pub fn index_of_exponents(&self, e: &[u32]) -> Option<usize> {
        self.exponents.iter().position(|x| x == e)
    }

    /// Verifies closure, commutativity and exponent `m` against actual matrix products.
    pub fn verify(&self) -> bool {
        let n = self.order();
        let field = self.elements[0].field();
        let id = CycMatrix::identity(field, self.elements[0].rows());
        let products_ok = (0..n).into_par_iter().all(|a| {
            (0..n).all(|b| {
                let ab = &self.elements[a] * &self.elements[b];
                ab == self.elements[self.table[a][b]] && self.table[a][b] == self.table[b][a]
            })
        });
        products_ok && self.elements.iter().all(|g| g.pow(self.m) == id)
    }
}

fn exponent_vectors(m: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|e| (0..m).map(move |j| [e.clone(), vec![j]].concat()))
            .collect();
    }
    out
}

fn check_orthogonal_family(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
) -> Result<(), ArrangementError> {
    if roots.len() + 1 > lattice.rank() && !roots.is_empty() {
        return Err(ArrangementError::TooManyRoots(roots.len()));
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if proportional(roots[i].vector(), roots[j].vector()).is_some() {
                return Err(ArrangementError::Repeated(i, j));
            }
            if !lattice.form(roots[i].vector(), roots[j].vector()).is_zero() {
                return Err(ArrangementError::NotOrthogonal(i, j));
            }
        }
    }
    Ok(())
}

/// The product `Π h_{r_i}^{j_i}` for pairwise orthogonal roots.
pub fn group_element(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
    exps: &[u32],
) -> Result<CycMatrix, ArrangementError> {
    if roots.len() != exps.len() {
        return Err(ArrangementError::ExponentLength {
            found: exps.len(),
            expected: roots.len(),
        });
    }
    let id = CycMatrix::identity(lattice.field(), lattice.rank());
    Ok(roots.iter().zip(exps).fold(id, |acc, (r, &j)| {
        &acc * &reflection(lattice, r, j as i64).matrix
    }))
}

pub fn reflection_group(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
) -> Result<ReflectionGroup, ArrangementError> {
    check_orthogonal_family(lattice, roots)?;
    let (m, _) = torsion_unit_group(lattice.field());
    let k = roots.len();
    let exponents = exponent_vectors(m, k);
    // powers of each generator, then products in exponent order
    let powers: Vec<Vec<CycMatrix>> = roots
        .iter()
        .map(|r| {
            (0..m)
                .map(|j| reflection(lattice, r, j as i64).matrix)
                .collect()
        })
        .collect();
    let id = CycMatrix::identity(lattice.field(), lattice.rank());
    let elements: Vec<CycMatrix> = exponents
        .par_iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .fold(id.clone(), |acc, (i, &j)| &acc * &powers[i][j as usize])
        })
        .collect();
    let index = |e: &[u32]| {
        e.iter()
            .fold(0usize, |acc, &j| acc * m as usize + j as usize)
    };
    let table = exponents
        .iter()
        .map(|a| {
            exponents
                .iter()
                .map(|b| {
                    index(
                        &a.iter()
                            .zip(b)
                            .map(|(x, y)| (x + y) % m)
                            .collect::<Vec<_>>(),
                    )
                })
                .collect()
        })
        .collect();
    Ok(ReflectionGroup {
        roots: roots.to_vec(),
        m,
        exponents,
        elements,
        table,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointSample {
    pub fixed: bool,
    pub on_hyperplanes: bool,
    pub negative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusReport {
    pub consistent: bool,
    pub samples: Vec<FixedPointSample>,
    pub warning: Option<String>,
}

/// For `φ = Π h_{r_i}^{j_i}`: a point of the ball is fixed by `φ` (as a line) iff it
/// lies on every `H_{r_i}` with `j_i ≠ 0`. Non-negative sample points are reported
/// but not used for the verdict.
pub fn fixed_locus_check(
    lattice: &HermitianLattice,
    roots: &[ShortRoot],
    exps: &[u32],
    points: &[CycVector],
) -> Result<FixedLocusReport, ArrangementError> {
    check_orthogonal_family(lattice, roots)?;
    let phi = group_element(lattice, roots, exps)?;
    let (m, _) = torsion_unit_group(lattice.field());
    if exps.iter().all(|&j| j % m == 0) {
        return Ok(FixedLocusReport {
            consistent: true,
            samples: vec![],
            warning: Some("identity element fixes every point; check skipped".into()),
        });
    }
    let place = hyperbolic_place(lattice)?;
    let active: Vec<&ShortRoot> = roots
        .iter()
        .zip(exps)
        .filter(|(_, &j)| j % m != 0)
        .map(|(r, _)| r)
        .collect();
    let mut samples = Vec::new();
    for x in points {
        let fixed = proportional(x, &phi.apply(x)).is_some();
        let on = active.iter().all(|r| lattice.form(x, r.vector()).is_zero());
        let negative = lattice
            .norm(x)
            .sign_at(place)
            .map_err(HermitianError::from)?
            == Ordering::Less;
        samples.push(FixedPointSample {
            fixed,
            on_hyperplanes: on,
            negative,
        });
    }
    let consistent = samples
        .iter()
        .all(|s| !s.negative || s.fixed == s.on_hyperplanes);
    Ok(FixedLocusReport {
        consistent,
        samples,
        warning: None,
    })
}
