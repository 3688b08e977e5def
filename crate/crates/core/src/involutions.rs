//! Anti-unitary involutions `α(x) = A σ(x)` of a hermitian lattice, their `F_5`
//! invariants, fixed lattices over `O_F`, and the saturation identity
//! `Λ = O_K Λ^α + O_K θ (Λ^α)^∨`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{quintic, CycElt, RealElt};
use crate::f5;
use crate::golden::{self, ZLambda};
use crate::hermitian::{
    reduce_matrix_mod_theta, signature_of_gram, HermitianError, HermitianLattice, SignatureProfile,
};
use crate::linalg::{self, ZMatrix};
use crate::matrix::{vec_conjugate, CycMatrix, CycVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("matrix has the wrong size for a rank-{0} lattice")]
    Shape(usize),
    #[error("A·σ(A) ≠ 1: the map is not an involution")]
    NotInvolutive,
    #[error("the map is not an anti-isometry: Aᵀ G σ(A) ≠ σ(G)")]
    NotAntiIsometry,
    #[error("matrix entries are not integral")]
    NonIntegral,
    #[error("reference involutions are only defined on quintic-std")]
    WrongLattice,
    #[error("involution could not be classified: invariants {0:?}")]
    Unclassifiable([InvolutionInvariant; 2]),
    #[error("fixed lattice has O_F-rank {found}, expected {expected}")]
    FixedRank { found: usize, expected: usize },
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiUnitaryInvolution {
    lattice: HermitianLattice,
    matrix: CycMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetClass {
    Square,
    Nonsquare,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvolutionInvariant {
    pub dim_fixed: usize,
    pub det_class: DetClass,
}

impl AntiUnitaryInvolution {
    pub fn new(lattice: HermitianLattice, matrix: CycMatrix) -> Result<Self, InvolutionError> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n || *matrix.field() != *lattice.field() {
            return Err(InvolutionError::Shape(n));
        }
        if !matrix.is_integral() {
            return Err(InvolutionError::NonIntegral);
        }
        if !(&matrix * &matrix.conjugate()).is_identity() {
            return Err(InvolutionError::NotInvolutive);
        }
        let g = lattice.gram();
        if &(&matrix.transpose() * g) * &matrix.conjugate() != g.conjugate() {
            return Err(InvolutionError::NotAntiIsometry);
        }
        Ok(AntiUnitaryInvolution { lattice, matrix })
    }

    pub fn lattice(&self) -> &HermitianLattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[CycElt]) -> CycVector {
        self.matrix.apply(&vec_conjugate(x))
    }

    /// `−α`.
    pub fn negate(&self) -> Self {
        AntiUnitaryInvolution {
            lattice: self.lattice.clone(),
            matrix: -&self.matrix,
        }
    }

    /// `u·α` for a root of unity `u`.
    pub fn scaled(&self, u: &CycElt) -> Result<Self, InvolutionError> {
        Self::new(self.lattice.clone(), self.matrix.scale(u))
    }

    /// `g α g^{-1}` for an isometry `g` of the lattice; its matrix is `g A σ(g)^{-1}`.
    pub fn conjugated_by(&self, g: &CycMatrix) -> Result<Self, InvolutionError> {
        let inv = g
            .conjugate()
            .inverse()
            .ok_or(InvolutionError::Shape(self.lattice.rank()))?;
        Self::new(self.lattice.clone(), &(g * &self.matrix) * &inv)
    }

    /// `φ ∘ α` for a unitary `φ` (matrix `φ A`).
    pub fn compose_unitary(&self, phi: &CycMatrix) -> Result<Self, InvolutionError> {
        Self::new(self.lattice.clone(), phi * &self.matrix)
    }

    /// The `Z`-linear action on `Λ ≅ Z^{rank·d}` (columns are images of `b_i g^j`).
    pub fn z_action(&self) -> ZMatrix {
        let field = self.lattice.field();
        let d = field.degree();
        let n = self.lattice.rank();
        let mut m = vec![vec![BigInt::zero(); n * d]; n * d];
        for i in 0..n {
            for j in 0..d {
                let s = field.gen_pow(j as i64).conjugate();
                for r in 0..n {
                    let img = &self.matrix[(r, i)] * &s;
                    for (k, c) in img.coeffs().iter().enumerate() {
                        m[r * d + k][i * d + j] = c.to_integer();
                    }
                }
            }
        }
        m
    }
}

/// `α_0 = σ`, `α_1 = diag(−1, 1, 1)σ`, `α_2 = diag(−1, −1, 1)σ` on quintic-std.
pub fn reference_involutions(
    l: &HermitianLattice,
) -> Result<[AntiUnitaryInvolution; 3], InvolutionError> {
    if *l != HermitianLattice::quintic_std() {
        return Err(InvolutionError::WrongLattice);
    }
    let f = l.field();
    let mk = |signs: [i64; 3]| {
        let d: Vec<CycElt> = signs.iter().map(|&s| f.from_int(s)).collect();
        AntiUnitaryInvolution::new(l.clone(), CycMatrix::diagonal(f, &d))
    };
    Ok([mk([1, 1, 1])?, mk([-1, 1, 1])?, mk([-1, -1, 1])?])
}

fn det_class(a: u8) -> DetClass {
    match a % 5 {
        0 => DetClass::Zero,
        x if f5::is_square(x) => DetClass::Square,
        _ => DetClass::Nonsquare,
    }
}

/// `(dim W^α, square class of det q|_{W^α})` over `W = Λ/θΛ`.
pub fn invariant(alpha: &AntiUnitaryInvolution) -> Result<InvolutionInvariant, InvolutionError> {
    let a = reduce_matrix_mod_theta(alpha.matrix())?;
    let q = reduce_matrix_mod_theta(alpha.lattice().gram())?;
    let n = a.len();
    let mut am = a.clone();
    for (i, row) in am.iter_mut().enumerate() {
        row[i] = (row[i] + 4) % 5;
    }
    let ker = f5::kernel(&am, n);
    let k = ker.len();
    // gram of q on the fixed space: Vᵀ Q V
    let v: f5::F5Matrix = (0..n).map(|i| ker.iter().map(|c| c[i]).collect()).collect();
    let restricted = f5::mat_mul(&f5::mat_mul(&f5::transpose(&v), &q), &v);
    let det = if k == 0 { 1 } else { f5::det(&restricted) };
    Ok(InvolutionInvariant {
        dim_fixed: k,
        det_class: det_class(det),
    })
}

fn unordered(a: InvolutionInvariant, b: InvolutionInvariant) -> [InvolutionInvariant; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// The unordered invariant pair `{inv(α), inv(−α)}`.
pub fn invariant_pair(
    alpha: &AntiUnitaryInvolution,
) -> Result<[InvolutionInvariant; 2], InvolutionError> {
    Ok(unordered(invariant(alpha)?, invariant(&alpha.negate())?))
}

/// Index `j` of the reference involution `±α_j` that `α` is conjugate to.
pub fn classify(alpha: &AntiUnitaryInvolution) -> Result<usize, InvolutionError> {
    let refs = reference_involutions(&HermitianLattice::quintic_std())?;
    let ref_pairs: Vec<[InvolutionInvariant; 2]> =
        refs.iter().map(invariant_pair).collect::<Result<_, _>>()?;
    debug_assert!(
        ref_pairs[0] != ref_pairs[1]
            && ref_pairs[1] != ref_pairs[2]
            && ref_pairs[0] != ref_pairs[2]
    );
    if *alpha.lattice() != HermitianLattice::quintic_std() {
        return Err(InvolutionError::WrongLattice);
    }
    let pair = invariant_pair(alpha)?;
    if pair.iter().any(|i| i.det_class == DetClass::Zero) {
        return Err(InvolutionError::Unclassifiable(pair));
    }
    ref_pairs
        .iter()
        .position(|p| *p == pair)
        .ok_or(InvolutionError::Unclassifiable(pair))
}

/// `Λ^α` as a free `O_F`-module with the restricted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLattice {
    pub basis: Vec<CycVector>,
    pub gram: CycMatrix,
}

impl FixedLattice {
    pub fn gram_real(&self) -> Vec<Vec<RealElt>> {
        self.gram
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| RealElt::new(x).unwrap()).collect())
            .collect()
    }

    pub fn gram_golden(&self) -> Option<Vec<Vec<ZLambda>>> {
        self.gram
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ZLambda::from_elt).collect())
            .collect()
    }

    pub fn signature(&self) -> Result<SignatureProfile, HermitianError> {
        signature_of_gram(&self.gram)
    }
}

fn z_to_vector(lattice: &HermitianLattice, z: &[BigInt]) -> CycVector {
    let field = lattice.field();
    let d = field.degree();
    z.chunks(d)
        .map(|c| {
            CycElt::from_rationals(
                field,
                c.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect(),
            )
        })
        .collect()
}

fn vector_to_z(v: &[CycElt]) -> Option<Vec<BigInt>> {
    let mut out = Vec::new();
    for x in v {
        out.extend(x.int_coeffs()?);
    }
    Some(out)
}

/// A `Z`-basis of `Λ^α = ker(α − 1)`.
pub fn fixed_z_basis(alpha: &AntiUnitaryInvolution) -> Vec<CycVector> {
    let mut m = alpha.z_action();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    let n = m.len();
    linalg::integer_kernel(&m, n)
        .iter()
        .map(|z| z_to_vector(alpha.lattice(), z))
        .collect()
}

/// Greedily selects `K`-linearly independent vectors.
fn independent_subset(vs: &[CycVector], want: usize) -> Vec<CycVector> {
    let mut chosen: Vec<CycVector> = Vec::new();
    for v in vs {
        let mut cand = chosen.clone();
        cand.push(v.clone());
        if k_rank(&cand) == cand.len() {
            chosen = cand;
            if chosen.len() == want {
                break;
            }
        }
    }
    chosen
}

fn k_rank(vs: &[CycVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let cols = vs[0].len();
    let mut m: Vec<CycVector> = vs.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].inverse().unwrap();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                for k in 0..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= &d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix whose columns are the given vectors.
fn columns(vs: &[CycVector]) -> CycMatrix {
    CycMatrix::from_rows(vs.to_vec()).transpose()
}

/// `Λ^α` with an `O_F`-basis obtained by Hermite reduction over `Z[λ]` (quintic field).
pub fn fixed_lattice(alpha: &AntiUnitaryInvolution) -> Result<FixedLattice, InvolutionError> {
    let lattice = alpha.lattice();
    if !lattice.field().is_quintic() {
        return Err(HermitianError::WrongField(lattice.field().kind().to_string()).into());
    }
    let n = lattice.rank();
    let zb = fixed_z_basis(alpha);
    let v = independent_subset(&zb, n);
    if v.len() != n {
        return Err(InvolutionError::FixedRank {
            found: v.len(),
            expected: n,
        });
    }
    let vinv = columns(&v).inverse().expect("independent vectors");
    // F-coordinates of every Z-basis vector, as golden pairs
    let coords: Vec<Vec<(BigRational, BigRational)>> = zb
        .iter()
        .map(|w| {
            vinv.apply(w)
                .into_iter()
                .map(|c| {
                    RealElt::new(c)
                        .expect("fixed coordinates are real")
                        .golden()
                        .unwrap()
                })
                .collect()
        })
        .collect();
    let den = linalg::lcm_of_denominators(coords.iter().flatten().flat_map(|(u, v)| [u, v]));
    let dq = BigRational::from_integer(den.clone());
    let rows: Vec<Vec<ZLambda>> = coords
        .iter()
        .map(|r| {
            r.iter()
                .map(|(u, v)| {
                    let a = (u * &dq).to_integer();
                    let b = (v * &dq).to_integer();
                    ZLambda::new(
                        a.try_into().expect("small coordinates"),
                        b.try_into().expect("small coordinates"),
                    )
                })
                .collect()
        })
        .collect();
    let h = golden::hermite_rows(&rows);
    if h.len() != n {
        return Err(InvolutionError::FixedRank {
            found: h.len(),
            expected: n,
        });
    }
    let inv_den = BigRational::one() / dq;
    let basis: Vec<CycVector> = h
        .iter()
        .map(|row| {
            let mut acc: CycVector = vec![lattice.field().zero(); n];
            for (c, vi) in row.iter().zip(&v) {
                let s = c.to_elt().scale(&inv_den);
                for (a, x) in acc.iter_mut().zip(vi) {
                    *a += &(&s * x);
                }
            }
            acc
        })
        .collect();
    let basis = reduce_golden_basis(basis);
    let gram = CycMatrix::from_rows(
        basis
            .iter()
            .map(|x| basis.iter().map(|y| lattice.form(x, y)).collect())
            .collect(),
    );
    let fixed = FixedLattice { basis, gram };
    debug_assert!(fixed.basis.iter().all(|b| alpha.apply(b) == *b));
    Ok(fixed)
}

/// `Σ_τ Σ_i |τ(x_i)|²` restricted to the embeddings above one real place.
fn majorant_place(x: &[CycElt], place: usize) -> f64 {
    let field = x[0].field();
    let e = field.place_embedding(place);
    let ec = field.conjugate_embedding(e);
    x.iter()
        .map(|c| c.embed(e).norm_sqr() + c.embed(ec).norm_sqr())
        .sum()
}

fn inner_place(x: &[CycElt], y: &[CycElt], place: usize) -> f64 {
    let field = x[0].field();
    let e = field.place_embedding(place);
    let ec = field.conjugate_embedding(e);
    x.iter()
        .zip(y)
        .map(|(a, b)| (a.embed(e) * b.embed(e).conj() + a.embed(ec) * b.embed(ec).conj()).re)
        .sum()
}

fn majorant(x: &[CycElt]) -> f64 {
    majorant_place(x, 0) + majorant_place(x, 1)
}

/// Pairwise size reduction over `Z[λ]` with respect to the standard positive
/// definite majorant, which keeps the entries of a fixed-lattice basis small.
fn reduce_golden_basis(mut basis: Vec<CycVector>) -> Vec<CycVector> {
    let n = basis.len();
    let s5 = 5f64.sqrt();
    let (l0, l1) = ((s5 - 1.0) / 2.0, (-1.0 - s5) / 2.0);
    for _ in 0..200 {
        let mut improved = false;
        for k in 0..n {
            for j in (0..n).filter(|&j| j != k) {
                let c: Vec<f64> = (0..2)
                    .map(|p| inner_place(&basis[k], &basis[j], p) / majorant_place(&basis[j], p))
                    .collect();
                let b = (c[0] - c[1]) / (l0 - l1);
                let a = c[0] - b * l0;
                let before = majorant(&basis[k]);
                let mut best: Option<(f64, CycVector)> = None;
                for da in [-1.0, 0.0, 1.0] {
                    for db in [-1.0, 0.0, 1.0] {
                        let q = ZLambda::new((a.round() + da) as i128, (b.round() + db) as i128);
                        if q.is_zero() {
                            continue;
                        }
                        let qe = q.to_elt();
                        let cand: CycVector = basis[k]
                            .iter()
                            .zip(&basis[j])
                            .map(|(x, y)| x - &(&qe * y))
                            .collect();
                        let m = majorant(&cand);
                        if m < before * (1.0 - 1e-9) && best.as_ref().is_none_or(|(bm, _)| m < *bm)
                        {
                            best = Some((m, cand));
                        }
                    }
                }
                if let Some((_, cand)) = best {
                    basis[k] = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    basis
}

/// Outcome of comparing a fixed-lattice form with a diagonal target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormMatch {
    /// An explicit `O_F`-congruence to the target was found.
    Congruent,
    /// No explicit congruence found, but the determinant class and both real
    /// signatures agree.
    InvariantsAgree,
    Different,
}

/// Greedy symmetric elimination over `Z[λ]` using pivots that divide their row.
fn diagonalize_over_golden(g: &[Vec<ZLambda>]) -> Option<Vec<ZLambda>> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut diag = Vec::new();
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let &k = alive.iter().find(|&&k| {
            let p = a[k][k];
            !p.is_zero() && alive.iter().all(|&j| p.divides(&a[k][j]))
        })?;
        let p = a[k][k];
        alive.retain(|&j| j != k);
        for &i in &alive {
            let c = a[i][k].exact_div(&p)?;
            for &j in alive.iter().chain(std::iter::once(&k)) {
                let t = c * a[k][j];
                a[i][j] = a[i][j] - t;
            }
            for &j in alive.iter().chain(std::iter::once(&k)) {
                let t = c * a[j][k];
                a[j][i] = a[j][i] - t;
            }
        }
        diag.push(p);
    }
    Some(diag)
}

/// Totally positive unit ratio (i.e. a unit square in `O_F`).
fn unit_square_ratio(x: &ZLambda, y: &ZLambda) -> bool {
    match x.exact_div(y) {
        Some(r) => r.is_unit() && r.value_at(0) > 0.0 && r.value_at(1) > 0.0,
        None => false,
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn diagonal_matches(g: &[Vec<ZLambda>], t: &[ZLambda]) -> bool {
    match diagonalize_over_golden(g) {
        Some(d) => {
            d.len() == t.len()
                && permutations(d.len())
                    .iter()
                    .any(|p| d.iter().zip(p).all(|(x, &j)| unit_square_ratio(x, &t[j])))
        }
        None => false,
    }
}

/// `b_k ← b_k + c·b_j` applied to a gram matrix over `Z[λ]` (real form, so `σ(c) = c`).
fn elementary(g: &[Vec<ZLambda>], k: usize, j: usize, c: ZLambda) -> Vec<Vec<ZLambda>> {
    let n = g.len();
    let mut a = g.to_vec();
    for i in (0..n).filter(|&i| i != k) {
        a[k][i] = g[k][i] + c * g[j][i];
        a[i][k] = a[k][i];
    }
    a[k][k] = g[k][k] + (c + c) * g[k][j] + c * c * g[j][j];
    a
}

/// Greedy diagonalization, retried after up to two elementary basis changes.
fn explicit_congruence(g: &[Vec<ZLambda>], t: &[ZLambda]) -> bool {
    let n = g.len();
    if diagonal_matches(g, t) {
        return true;
    }
    let l = ZLambda::LAMBDA;
    let cs = [
        ZLambda::ONE,
        -ZLambda::ONE,
        l,
        -l,
        l + ZLambda::ONE,
        -(l + ZLambda::ONE),
        l * l,
        -(l * l),
    ];
    let mut moves = Vec::new();
    for k in 0..n {
        for j in (0..n).filter(|&j| j != k) {
            moves.extend(cs.iter().map(|&c| (k, j, c)));
        }
    }
    let first: Vec<Vec<Vec<ZLambda>>> = moves
        .iter()
        .map(|&(k, j, c)| elementary(g, k, j, c))
        .collect();
    if first.iter().any(|h| diagonal_matches(h, t)) {
        return true;
    }
    first.iter().any(|h| {
        moves
            .iter()
            .any(|&(k, j, c)| diagonal_matches(&elementary(h, k, j, c), t))
    })
}

/// Compares the fixed form with `diag(target)`.
pub fn match_diagonal_form(
    fixed: &FixedLattice,
    target: &[RealElt],
) -> Result<FormMatch, InvolutionError> {
    let t: Option<Vec<ZLambda>> = target.iter().map(ZLambda::from_real).collect();
    if let (Some(g), Some(t)) = (fixed.gram_golden(), t.as_ref()) {
        if explicit_congruence(&g, t) {
            return Ok(FormMatch::Congruent);
        }
    }
    let field = fixed.gram.field();
    let target_m = CycMatrix::diagonal(
        field,
        &target.iter().map(|x| x.elt().clone()).collect::<Vec<_>>(),
    );
    let sig_a = fixed.signature()?;
    let sig_b = signature_of_gram(&target_m)?;
    let det_a = RealElt::new(fixed.gram.det()).unwrap();
    let det_b = RealElt::new(target_m.det()).unwrap();
    let ratio =
        RealElt::new(det_a.elt() * &det_b.elt().inverse().ok_or(HermitianError::Degenerate)?)
            .unwrap();
    let unit_ratio =
        ratio.elt().is_unit() && ratio.is_totally_positive().map_err(HermitianError::from)?;
    Ok(if sig_a == sig_b && unit_ratio {
        FormMatch::InvariantsAgree
    } else {
        FormMatch::Different
    })
}

/// The diagonal forms `q_0 = (1, 1, −λ)`, `q_1 = (|θ|², 1, −λ)`, `q_2 = (|θ|², |θ|², −λ)`.
pub fn reference_forms() -> [Vec<RealElt>; 3] {
    let f = quintic::field();
    let one = RealElt::new(f.one()).unwrap();
    let t = quintic::theta_norm();
    let ml = RealElt::new(-quintic::lambda()).unwrap();
    [
        vec![one.clone(), one.clone(), ml.clone()],
        vec![t.clone(), one, ml.clone()],
        vec![t.clone(), t, ml],
    ]
}

/// Dual basis of `Λ^α` inside `Λ^α ⊗ F` with respect to the restricted form.
pub fn dual_basis(fixed: &FixedLattice) -> Vec<CycVector> {
    let c = fixed.gram.inverse().expect("fixed form is nondegenerate");
    let n = fixed.basis.len();
    let dim = fixed.basis[0].len();
    let field = fixed.gram.field();
    (0..n)
        .map(|i| {
            let mut acc = vec![field.zero(); dim];
            for k in 0..n {
                for (a, x) in acc.iter_mut().zip(&fixed.basis[k]) {
                    *a += &(&c[(i, k)] * x);
                }
            }
            acc
        })
        .collect()
}

/// Tests `Λ = O_K·span(basis) + O_K·θ·span(basis)^∨` by Hermite normal form.
pub fn saturation_holds(lattice: &HermitianLattice, fixed: &FixedLattice) -> bool {
    let field = lattice.field();
    let d = field.degree();
    let theta = quintic::theta();
    let mut gens: Vec<CycVector> = fixed.basis.clone();
    gens.extend(
        dual_basis(fixed)
            .into_iter()
            .map(|v| v.iter().map(|x| x * &theta).collect()),
    );
    let mut zgens = Vec::new();
    for g in &gens {
        for k in 0..d {
            let s = field.gen_pow(k as i64);
            match vector_to_z(&g.iter().map(|x| x * &s).collect::<Vec<_>>()) {
                Some(z) => zgens.push(z),
                None => return false,
            }
        }
    }
    let h = linalg::hermite_rows(&zgens);
    let n = lattice.rank() * d;
    h.len() == n
        && (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    h[i][j].is_one()
                } else {
                    h[i][j].is_zero()
                }
            })
        })
}

pub fn saturation_check(alpha: &AntiUnitaryInvolution) -> Result<bool, InvolutionError> {
    let fixed = fixed_lattice(alpha)?;
    Ok(saturation_holds(alpha.lattice(), &fixed))
}

/// `fixed` with every basis vector multiplied by `c` (used for negative controls).
pub fn scaled_fixed(lattice: &HermitianLattice, fixed: &FixedLattice, c: i64) -> FixedLattice {
    let basis: Vec<CycVector> = fixed
        .basis
        .iter()
        .map(|v| v.iter().map(|x| x.scale_int(c)).collect())
        .collect();
    let gram = CycMatrix::from_rows(
        basis
            .iter()
            .map(|x| basis.iter().map(|y| lattice.form(x, y)).collect())
            .collect(),
    );
    FixedLattice { basis, gram }
}

/// Sorting helper for reports: invariants in a stable order.
pub fn compare_invariants(a: &InvolutionInvariant, b: &InvolutionInvariant) -> Ordering {
    a.cmp(b)
}

/// Isometries of quintic-std used to move involutions around: the swap of the first
/// two coordinates, `diag(ζ₁₀)` in each coordinate, and `ζ`-reflections in four short
/// roots with a nonzero last coordinate.
pub fn unitary_generators(l: &HermitianLattice) -> Result<Vec<CycMatrix>, InvolutionError> {
    if *l != HermitianLattice::quintic_std() {
        return Err(InvolutionError::WrongLattice);
    }
    let f = l.field();
    let z = quintic::zeta10();
    let mut gens = Vec::new();
    let mut swap = CycMatrix::zero(f, 3, 3);
    swap[(0, 1)] = f.one();
    swap[(1, 0)] = f.one();
    swap[(2, 2)] = f.one();
    gens.push(swap);
    for k in 0..3 {
        let mut d = vec![f.one(); 3];
        d[k] = z.clone();
        gens.push(CycMatrix::diagonal(f, &d));
    }
    let roots = crate::arrangement::enumerate_short_roots(l, 1)
        .map_err(|_| InvolutionError::WrongLattice)?;
    for (k, r) in roots
        .iter()
        .filter(|r| !r.vector()[2].is_zero())
        .take(4)
        .enumerate()
    {
        gens.push(crate::arrangement::reflection(l, r, 1 + 2 * k as i64).matrix);
    }
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilitySuiteReport {
    pub trials: usize,
    pub stable: usize,
    /// `(trial, reference index, class found)` for every disagreement.
    pub failures: Vec<(usize, usize, Option<usize>)>,
}

impl StabilitySuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.stable == self.trials
    }
}

/// Classifies `u · g α_j g^{-1}` for seeded random references `±α_j`, unit
/// scalings `u ∈ μ_K` and words `g` of length 1–4 in [`unitary_generators`].
pub fn classification_stability(
    trials: usize,
    seed: u64,
) -> Result<StabilitySuiteReport, InvolutionError> {
    use rand::{Rng, SeedableRng};
    let l = HermitianLattice::quintic_std();
    let refs = reference_involutions(&l)?;
    let gens = unitary_generators(&l)?;
    let f = l.field().clone();
    let z = quintic::zeta10();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut stable = 0;
    for t in 0..trials {
        let j = rng.random_range(0..3);
        let base = if rng.random_bool(0.5) {
            refs[j].negate()
        } else {
            refs[j].clone()
        };
        let len = rng.random_range(1..=4);
        let g = (0..len).fold(CycMatrix::identity(&f, 3), |acc, _| {
            &acc * &gens[rng.random_range(0..gens.len())]
        });
        let u = z.pow(rng.random_range(0..10));
        let moved = base.conjugated_by(&g)?.scaled(&u)?;
        match classify(&moved) {
            Ok(c) if c == j => stable += 1,
            Ok(c) => failures.push((t, j, Some(c))),
            Err(_) => failures.push((t, j, None)),
        }
    }
    Ok(StabilitySuiteReport {
        trials,
        stable,
        failures,
    })
}
