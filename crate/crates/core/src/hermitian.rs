//! Hermitian lattices `(O_K^n, 𝔥)` with `𝔥(x, y) = xᵀ G σ(y)`, and the
//! correspondence between skew-hermitian forms over `K` and `σ`-compatible
//! alternating forms over `Q`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclotomic::{quintic, CycElt, CyclotomicError, FieldDescriptor, FieldKind, RealElt};
use crate::f5;
use crate::linalg::{self, q, QMatrix, ZMatrix};
use crate::matrix::{dot, vec_conjugate, CycMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermitianError {
    #[error("gram matrix must be square and nonempty")]
    NotSquare,
    #[error("gram matrix is not hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("form is not skew-hermitian at ({0}, {1})")]
    NotSkewHermitian(usize, usize),
    #[error("alternating matrix is not skew-symmetric at ({0}, {1})")]
    NotAlternating(usize, usize),
    #[error("form is degenerate")]
    Degenerate,
    #[error("gram matrix has non-integral entries")]
    NonIntegral,
    #[error("E(ζx, y) ≠ E(x, σ(ζ)y) at basis pair ({0}, {1})")]
    Incompatible(usize, usize),
    #[error("Z-rank {zrank} is not a multiple of the field degree {degree}")]
    ShapeMismatch { zrank: usize, degree: usize },
    #[error("η must satisfy σ(η) = −η")]
    NotPurelyImaginary,
    #[error("operation requires the field Q(ζ_5), got {0}")]
    WrongField(String),
    #[error("unknown lattice preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Field(#[from] CyclotomicError),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermitianLattice {
    gram: CycMatrix,
}

fn check_square(g: &CycMatrix) -> Result<(), HermitianError> {
    if !g.is_square() || g.rows() == 0 {
        return Err(HermitianError::NotSquare);
    }
    Ok(())
}

impl HermitianLattice {
    /// Validates hermitian symmetry, integrality and nondegeneracy.
    pub fn new(gram: CycMatrix) -> Result<Self, HermitianError> {
        check_square(&gram)?;
        let n = gram.rows();
        for i in 0..n {
            for j in i..n {
                if gram[(i, j)] != gram[(j, i)].conjugate() {
                    return Err(HermitianError::NotHermitian(i, j));
                }
            }
        }
        if !gram.is_integral() {
            return Err(HermitianError::NonIntegral);
        }
        if gram.det().is_zero() {
            return Err(HermitianError::Degenerate);
        }
        Ok(HermitianLattice { gram })
    }

    /// `(O^3, diag(1, 1, (1−√5)/2))` over `Q(ζ_5)`, with `(1−√5)/2 = −λ`.
    pub fn quintic_std() -> Self {
        let f = quintic::field();
        let g = CycMatrix::diagonal(&f, &[f.one(), f.one(), -quintic::lambda()]);
        HermitianLattice::new(g).expect("standard lattice is valid")
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        HermitianLattice {
            gram: CycMatrix::identity(field, n),
        }
    }

    /// Named presets: `quintic-std`, `identity:N` (over `Q(ζ_5)`), or
    /// `identity:N@<field>` with a field such as `cyclotomic:3` or `quadratic:-7`.
    pub fn preset(name: &str) -> Result<Self, HermitianError> {
        let unknown = || HermitianError::UnknownPreset(name.to_string());
        if name == "quintic-std" {
            return Ok(Self::quintic_std());
        }
        let rest = name.strip_prefix("identity:").ok_or_else(unknown)?;
        let (n, field) = match rest.split_once('@') {
            Some((n, f)) => {
                let kind: FieldKind = f.parse()?;
                (n, FieldDescriptor::new(kind)?)
            }
            None => (rest, quintic::field()),
        };
        let n: usize = n.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        Ok(Self::identity(&field, n))
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.gram.field()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &CycMatrix {
        &self.gram
    }

    /// `𝔥(x, y) = xᵀ G σ(y)`.
    pub fn form(&self, x: &[CycElt], y: &[CycElt]) -> CycElt {
        dot(x, &self.gram.apply(&vec_conjugate(y)))
    }

    pub fn norm(&self, x: &[CycElt]) -> RealElt {
        RealElt::new(self.form(x, x)).expect("hermitian norms are real")
    }

    /// Whether `g` is an isometry: `gᵀ G σ(g) = G` (for `x ↦ g x` on column vectors).
    pub fn is_isometry(&self, g: &CycMatrix) -> bool {
        &(&g.transpose() * &self.gram) * &g.conjugate() == self.gram
    }
}

impl Serialize for HermitianLattice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HermitianLattice", 3)?;
        st.serialize_field("field", self.field())?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("gram", &self.gram)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for HermitianLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Repr {
            field: FieldDescriptor,
            rank: usize,
            gram: CycMatrix,
        }
        let r = Repr::deserialize(d)?;
        if *r.gram.field() != r.field || r.gram.rows() != r.rank {
            return Err(D::Error::custom("field or rank does not match gram"));
        }
        HermitianLattice::new(r.gram).map_err(D::Error::custom)
    }
}

/// `T` with `T[i][j] = −σ(T[j][i])`; entries may be rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewHermitianForm {
    gram: CycMatrix,
}

impl SkewHermitianForm {
    pub fn new(gram: CycMatrix) -> Result<Self, HermitianError> {
        check_square(&gram)?;
        let n = gram.rows();
        for i in 0..n {
            for j in i..n {
                if gram[(i, j)] != -gram[(j, i)].conjugate() {
                    return Err(HermitianError::NotSkewHermitian(i, j));
                }
            }
        }
        Ok(SkewHermitianForm { gram })
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.gram.field()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &CycMatrix {
        &self.gram
    }

    /// True iff `T(Λ, Λ) ⊆ 𝔇_K^{-1}`, i.e. `η·T` is integral.
    pub fn is_inverse_different_valued(&self) -> Result<bool, HermitianError> {
        let eta = crate::cyclotomic::different_generator(self.field())?;
        Ok(self.gram.scale(&eta).is_integral())
    }
}

/// An alternating `Q`-bilinear form on `Λ_Q ≅ Q^{rank·d}`, coordinates ordered
/// `b_0, b_0 g, …, b_0 g^{d-1}, b_1, …` for the field generator `g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlternatingForm {
    field: FieldDescriptor,
    rank: usize,
    matrix: QMatrix,
    module_action: ZMatrix,
}

/// Block-diagonal integer matrix of multiplication by `a` on `O_K^rank`.
pub fn multiplication_action(a: &CycElt, rank: usize) -> ZMatrix {
    let d = a.field().degree();
    let block = a.multiplication_matrix();
    let n = rank * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for b in 0..rank {
        for i in 0..d {
            for j in 0..d {
                m[b * d + i][b * d + j] = block[i][j].to_integer();
            }
        }
    }
    m
}

impl AlternatingForm {
    pub fn new(field: &FieldDescriptor, matrix: QMatrix) -> Result<Self, HermitianError> {
        let zrank = matrix.len();
        let d = field.degree();
        if zrank == 0 || !zrank.is_multiple_of(d) || matrix.iter().any(|r| r.len() != zrank) {
            return Err(HermitianError::ShapeMismatch { zrank, degree: d });
        }
        for i in 0..zrank {
            for j in i..zrank {
                if matrix[i][j] != -matrix[j][i].clone() {
                    return Err(HermitianError::NotAlternating(i, j));
                }
            }
        }
        let rank = zrank / d;
        Ok(AlternatingForm {
            field: field.clone(),
            rank,
            module_action: multiplication_action(&field.gen(), rank),
            matrix,
        })
    }

    pub fn from_ints(field: &FieldDescriptor, matrix: &[Vec<i64>]) -> Result<Self, HermitianError> {
        Self::new(
            field,
            matrix
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn zrank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn module_action(&self) -> &ZMatrix {
        &self.module_action
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|x| x.is_zero())
    }

    /// Checks `Mᵀ E = E S` with `M`, `S` the actions of `g` and `σ(g)`, i.e.
    /// `E(g·x, y) = E(x, σ(g)·y)` on all basis pairs.
    pub fn check_compatibility(&self) -> Result<(), HermitianError> {
        let n = self.zrank();
        let m = &self.module_action;
        let s = multiplication_action(&self.field.gen().conjugate(), self.rank);
        for u in 0..n {
            for v in 0..n {
                let lhs: BigRational = (0..n)
                    .filter(|&k| !m[k][u].is_zero())
                    .map(|k| BigRational::from_integer(m[k][u].clone()) * &self.matrix[k][v])
                    .sum();
                let rhs: BigRational = (0..n)
                    .filter(|&k| !s[k][v].is_zero())
                    .map(|k| &self.matrix[u][k] * BigRational::from_integer(s[k][v].clone()))
                    .sum();
                if lhs != rhs {
                    return Err(HermitianError::Incompatible(u, v));
                }
            }
        }
        Ok(())
    }

    /// `E(x, y) = xᵀ E y` on coordinate vectors.
    pub fn evaluate(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * &self.matrix[i][j] * yj;
                }
            }
        }
        acc
    }
}

fn gen_powers(field: &FieldDescriptor) -> (Vec<CycElt>, Vec<CycElt>) {
    let g = field.gen();
    let mut p = vec![field.one()];
    for _ in 1..field.degree() {
        let next = p.last().unwrap() * &g;
        p.push(next);
    }
    let c = p.iter().map(|x| x.conjugate()).collect();
    (p, c)
}

/// `E = Tr_{K/Q} ∘ T` on the `Z`-basis `{b_i g^j}`.
pub fn trace_form(t: &SkewHermitianForm) -> AlternatingForm {
    let field = t.field().clone();
    let d = field.degree();
    let n = t.rank();
    let (pows, cpows) = gen_powers(&field);
    let mut e = vec![vec![BigRational::zero(); n * d]; n * d];
    for i in 0..n {
        for ip in 0..n {
            let tij = &t.gram()[(i, ip)];
            if tij.is_zero() {
                continue;
            }
            for j in 0..d {
                let a = &pows[j] * tij;
                for jp in 0..d {
                    e[i * d + j][ip * d + jp] = (&a * &cpows[jp]).trace_q();
                }
            }
        }
    }
    AlternatingForm::new(&field, e).expect("traces of skew-hermitian forms are alternating")
}

/// The unique skew-hermitian `T` with `Tr ∘ T = E`.
///
/// Uses the averaging formula `T(x, y) = (1/p) Σ_j ζ^j E(x, ζ^j y)` over `Q(ζ_p)`
/// for prime `p`, and trace-dual coordinates otherwise.
pub fn skew_from_alternating(e: &AlternatingForm) -> Result<SkewHermitianForm, HermitianError> {
    match e.field.conductor() {
        Some(p) if (2..p).all(|k| p % k != 0) => skew_from_alternating_averaged(e),
        _ => skew_from_alternating_trace_dual(e),
    }
}

/// Trace-dual route: solve `Tr(g^j t) = E(b_i g^j, b_{i'})` for each entry.
pub fn skew_from_alternating_trace_dual(
    e: &AlternatingForm,
) -> Result<SkewHermitianForm, HermitianError> {
    e.check_compatibility()?;
    let field = &e.field;
    let d = field.degree();
    let n = e.rank;
    let g = field.gen();
    let mut pows = vec![field.one()];
    for _ in 1..(2 * d - 1) {
        let next = pows.last().unwrap() * &g;
        pows.push(next);
    }
    let traces: Vec<BigRational> = pows.iter().map(|p| p.trace_q()).collect();
    let a: QMatrix = (0..d)
        .map(|j| (0..d).map(|k| traces[j + k].clone()).collect())
        .collect();
    let mut t = CycMatrix::zero(field, n, n);
    for i in 0..n {
        for ip in 0..n {
            let rhs: Vec<BigRational> = (0..d)
                .map(|j| e.matrix[i * d + j][ip * d].clone())
                .collect();
            let sol = linalg::rational_solve(&a, &rhs).expect("trace form is nondegenerate");
            t[(i, ip)] = CycElt::from_rationals(field, sol);
        }
    }
    let t = SkewHermitianForm::new(t)?;
    debug_assert_eq!(trace_form(&t).matrix, e.matrix);
    Ok(t)
}

/// Averaging route over `Q(ζ_p)`, `p` prime.
pub fn skew_from_alternating_averaged(
    e: &AlternatingForm,
) -> Result<SkewHermitianForm, HermitianError> {
    let field = &e.field;
    let p = match field.conductor() {
        Some(p) if (2..p).all(|k| p % k != 0) => p,
        _ => {
            return Err(HermitianError::Field(CyclotomicError::Unsupported(
                field.kind().to_string(),
            )))
        }
    };
    e.check_compatibility()?;
    let d = field.degree();
    let n = e.rank;
    let zpows: Vec<CycElt> = (0..p as i64).map(|j| field.gen_pow(j)).collect();
    let mut t = CycMatrix::zero(field, n, n);
    for i in 0..n {
        for ip in 0..n {
            let mut acc = field.zero();
            for z in &zpows {
                // E(b_i, ζ^j b_{i'}) with ζ^j b_{i'} = Σ_k c_k b_{i'} ζ^k
                let val: BigRational = z
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| c * &e.matrix[i * d][ip * d + k])
                    .sum();
                if !val.is_zero() {
                    acc += &z.scale(&val);
                }
            }
            t[(i, ip)] = acc.scale(&BigRational::new(1.into(), (p as i64).into()));
        }
    }
    SkewHermitianForm::new(t)
}

/// `𝔥 = η · T` for `T = skew_from_alternating(E)`.
pub fn hermitian_from_symplectic(
    e: &AlternatingForm,
    eta: &CycElt,
) -> Result<HermitianLattice, HermitianError> {
    if eta.is_zero() || eta.conjugate() != -eta.clone() {
        return Err(HermitianError::NotPurelyImaginary);
    }
    if e.is_zero() {
        return Err(HermitianError::Degenerate);
    }
    let t = skew_from_alternating(e)?;
    HermitianLattice::new(t.gram().scale(eta))
}

/// Signature `(r, s)` of `𝔥^τ` for one embedding `τ ∈ Ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub embedding: usize,
    pub unit: Option<u32>,
    pub r: usize,
    pub s: usize,
}

/// Signatures at the embeddings of `Ψ`, in place order. The entry for the
/// conjugate embedding `τσ` is reported swapped, `(s, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureProfile {
    pub entries: Vec<SignatureEntry>,
}

impl SignatureProfile {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|e| (e.r, e.s)).collect()
    }

    /// The pair attached to any embedding, using the swap convention at `τσ`.
    pub fn at_embedding(&self, field: &FieldDescriptor, idx: usize) -> (usize, usize) {
        for e in &self.entries {
            if e.embedding == idx {
                return (e.r, e.s);
            }
            if field.conjugate_embedding(e.embedding) == idx {
                return (e.s, e.r);
            }
        }
        panic!("embedding index {idx} out of range")
    }
}

/// Congruence diagonalization: returns real pivots `d_k` and `P` (rows are the new
/// basis vectors) with `P G σ(P)ᵀ = diag(d)`.
pub fn diagonalize_hermitian(
    gram: &CycMatrix,
) -> Result<(Vec<RealElt>, CycMatrix), HermitianError> {
    check_square(gram)?;
    let field = gram.field().clone();
    let n = gram.rows();
    let mut a = gram.clone();
    let mut p = CycMatrix::identity(&field, n);
    let g = field.gen();
    // b_k += c b_j
    let add = |a: &mut CycMatrix, p: &mut CycMatrix, k: usize, j: usize, c: &CycElt| {
        let cc = c.conjugate();
        for l in 0..n {
            let v = &a[(j, l)] * c;
            a[(k, l)] += &v;
            let v = &p[(j, l)] * c;
            p[(k, l)] += &v;
        }
        for l in 0..n {
            let v = &a[(l, j)] * &cc;
            a[(l, k)] += &v;
        }
    };
    let swap = |a: &mut CycMatrix, p: &mut CycMatrix, k: usize, j: usize| {
        for l in 0..n {
            let t = a[(k, l)].clone();
            a[(k, l)] = a[(j, l)].clone();
            a[(j, l)] = t;
            let t = p[(k, l)].clone();
            p[(k, l)] = p[(j, l)].clone();
            p[(j, l)] = t;
        }
        for l in 0..n {
            let t = a[(l, k)].clone();
            a[(l, k)] = a[(l, j)].clone();
            a[(l, j)] = t;
        }
    };
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, k, j);
            } else {
                let j = (k + 1..n)
                    .find(|&j| !a[(k, j)].is_zero())
                    .ok_or(HermitianError::Degenerate)?;
                add(&mut a, &mut p, k, j, &field.one());
                if a[(k, k)].is_zero() {
                    // h_jk was purely imaginary; undo and use the non-real generator
                    add(&mut a, &mut p, k, j, &-field.one());
                    add(&mut a, &mut p, k, j, &g);
                }
                debug_assert!(!a[(k, k)].is_zero());
            }
        }
        let piv = a[(k, k)].clone();
        let inv = piv.inverse().unwrap();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let c = -(&a[(i, k)] * &inv);
            add(&mut a, &mut p, i, k, &c);
        }
        pivots.push(RealElt::new(piv).map_err(|_| HermitianError::NotHermitian(k, k))?);
    }
    Ok((pivots, p))
}

fn signature_of_pivots(
    field: &FieldDescriptor,
    pivots: &[RealElt],
) -> Result<SignatureProfile, HermitianError> {
    let mut entries = Vec::new();
    for (place, &emb) in field.cm_type().iter().enumerate() {
        let (mut r, mut s) = (0, 0);
        for d in pivots {
            match d.sign_at(place)? {
                Ordering::Greater => r += 1,
                Ordering::Less => s += 1,
                Ordering::Equal => return Err(HermitianError::Degenerate),
            }
        }
        entries.push(SignatureEntry {
            embedding: emb,
            unit: field.embedding_unit(emb),
            r,
            s,
        });
    }
    Ok(SignatureProfile { entries })
}

pub fn signature(l: &HermitianLattice) -> Result<SignatureProfile, HermitianError> {
    signature_of_gram(l.gram())
}

/// Signature of any nondegenerate hermitian matrix (entries may be rational).
pub fn signature_of_gram(g: &CycMatrix) -> Result<SignatureProfile, HermitianError> {
    let (pivots, _) = diagonalize_hermitian(g)?;
    signature_of_pivots(g.field(), &pivots)
}

/// True iff the dual lattice equals `Λ`, i.e. `G^{-1}` is integral.
pub fn is_unimodular(l: &HermitianLattice) -> bool {
    l.gram().inverse().is_some_and(|inv| inv.is_integral())
}

/// The `F_5`-quadratic space `Λ/θΛ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSpaceF5 {
    pub dim: usize,
    pub gram: f5::F5Matrix,
}

impl QuadraticSpaceF5 {
    pub fn det(&self) -> u8 {
        f5::det(&self.gram)
    }
}

/// Image of an integral element of `Z[ζ_5]` under `ζ ↦ 1`, i.e. modulo `θ`.
pub fn reduce_elt_mod_theta(x: &CycElt) -> Result<u8, HermitianError> {
    if !x.field().is_quintic() {
        return Err(HermitianError::WrongField(x.field().kind().to_string()));
    }
    let c = x.int_coeffs().ok_or(HermitianError::NonIntegral)?;
    let s: BigInt = c.iter().sum();
    Ok((s % 5i32 + 5i32).to_i64().map(|v| (v % 5) as u8).unwrap())
}

pub fn reduce_matrix_mod_theta(m: &CycMatrix) -> Result<f5::F5Matrix, HermitianError> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| reduce_elt_mod_theta(&m[(i, j)]))
                .collect()
        })
        .collect()
}

pub fn reduce_mod_theta(l: &HermitianLattice) -> Result<QuadraticSpaceF5, HermitianError> {
    debug_assert_eq!(reduce_elt_mod_theta(&quintic::theta()), Ok(0));
    let gram = reduce_matrix_mod_theta(l.gram())?;
    Ok(QuadraticSpaceF5 {
        dim: l.rank(),
        gram,
    })
}

/// `Σ_i x_i g^j`-coordinates of a complex vector of `Λ ⊗ C` projected to the
/// eigenspace where `g` acts by `τ_idx(g)`: returns a vector of `C^rank`.
pub fn eigen_coordinates(field: &FieldDescriptor, x: &[Complex64], idx: usize) -> Vec<Complex64> {
    let d = field.degree();
    let z = field.generator_value(idx);
    x.chunks(d)
        .map(|block| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut p = Complex64::new(1.0, 0.0);
            for c in block {
                acc += c * p;
                p *= z;
            }
            acc
        })
        .collect()
}

/// `|E_C(x, ȳ) − Σ_φ T^φ(x^φ, y^φ)|` for complex vectors `x`, `y` of `Λ ⊗ C`.
pub fn agree_discrepancy(t: &SkewHermitianForm, x: &[Complex64], y: &[Complex64]) -> f64 {
    let e = trace_form(t);
    let n = e.zrank();
    let ef: Vec<Vec<f64>> = e
        .matrix
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64().unwrap()).collect())
        .collect();
    let mut lhs = Complex64::new(0.0, 0.0);
    for u in 0..n {
        for v in 0..n {
            lhs += x[u] * ef[u][v] * y[v].conj();
        }
    }
    let field = t.field();
    let mut rhs = Complex64::new(0.0, 0.0);
    for idx in 0..field.degree() {
        let xp = eigen_coordinates(field, x, idx);
        let yp = eigen_coordinates(field, y, idx);
        for i in 0..t.rank() {
            for j in 0..t.rank() {
                rhs += xp[i] * t.gram()[(i, j)].embed(idx) * yp[j].conj();
            }
        }
    }
    (lhs - rhs).norm()
}

/// A random integral skew-hermitian matrix with power-basis coefficients in
/// `[−bound, bound]`.
pub fn random_skew_hermitian(
    rng: &mut impl rand::Rng,
    field: &FieldDescriptor,
    n: usize,
    bound: i64,
) -> SkewHermitianForm {
    let mut elt = || {
        let c: Vec<i64> = (0..field.degree())
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        CycElt::from_ints(field, &c)
    };
    let mut t = CycMatrix::zero(field, n, n);
    for i in 0..n {
        let x = elt();
        t[(i, i)] = &x - &x.conjugate();
        for j in i + 1..n {
            let a = elt();
            t[(j, i)] = -a.conjugate();
            t[(i, j)] = a;
        }
    }
    SkewHermitianForm::new(t).expect("skew-hermitian by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_reduces_to_zero() {
        assert_eq!(reduce_elt_mod_theta(&quintic::theta()).unwrap(), 0);
        assert_eq!(reduce_elt_mod_theta(&quintic::lambda()).unwrap(), 2);
    }

    #[test]
    fn presets() {
        assert_eq!(HermitianLattice::preset("identity:3").unwrap().rank(), 3);
        let l = HermitianLattice::preset("identity:2@quadratic:-7").unwrap();
        assert_eq!(l.field().degree(), 2);
        assert!(HermitianLattice::preset("bogus").is_err());
    }
}
