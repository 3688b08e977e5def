//! Dense matrices and vectors over a field from [`crate::cyclotomic`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{CycElt, FieldDescriptor};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<CycElt>,
}

pub type CycVector = Vec<CycElt>;

impl CycMatrix {
    pub fn zero(field: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        CycMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: &FieldDescriptor, diag: &[CycElt]) -> Self {
        let mut m = Self::zero(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows. Panics on ragged input or an empty row list.
    pub fn from_rows(rows: Vec<Vec<CycElt>>) -> Self {
        let field = rows[0][0].field().clone();
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        CycMatrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-coefficient constructor: `entries[i][j]` is the power-basis vector.
    pub fn from_int_entries(field: &FieldDescriptor, entries: &[Vec<Vec<i64>>]) -> Self {
        Self::from_rows(
            entries
                .iter()
                .map(|row| row.iter().map(|c| CycElt::from_ints(field, c)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<CycElt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<CycElt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycElt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Entrywise `σ`.
    pub fn conjugate(&self) -> Self {
        self.map(|x| x.conjugate())
    }

    /// `σ(M)ᵀ`.
    pub fn adjoint(&self) -> Self {
        self.conjugate().transpose()
    }

    pub fn map(&self, f: impl Fn(&CycElt) -> CycElt) -> Self {
        CycMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &CycElt) -> Self {
        self.map(|x| x * s)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn apply(&self, v: &[CycElt]) -> CycVector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_matrix(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        m[(i, j)] += &p;
                    }
                }
            }
        }
        m
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            result = result.mul_matrix(self);
        }
        result
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> CycElt {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return self.field.zero();
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inverse().unwrap();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= &d;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.to_rows();
        let mut inv = Self::identity(&self.field, n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            inv.swap(col, piv);
            let p = m[col][col].inverse().unwrap();
            for c in 0..n {
                m[col][c] = &m[col][c] * &p;
                inv[col][c] = &inv[col][c] * &p;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for c in 0..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= &d;
                    let d = &f * &inv[col][c];
                    inv[r][c] -= &d;
                }
            }
        }
        Some(Self::from_rows(inv))
    }
}

impl Index<(usize, usize)> for CycMatrix {
    type Output = CycElt;
    fn index(&self, (i, j): (usize, usize)) -> &CycElt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CycMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycElt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CycMatrix {
    type Output = CycMatrix;
    fn mul(self, rhs: &CycMatrix) -> CycMatrix {
        self.mul_matrix(rhs)
    }
}

impl Add for &CycMatrix {
    type Output = CycMatrix;
    fn add(self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CycMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycMatrix {
    type Output = CycMatrix;
    fn sub(self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CycMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycMatrix {
    type Output = CycMatrix;
    fn neg(self) -> CycMatrix {
        self.map(|x| -x)
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "CycMatrix {}x{} over {}",
            self.rows,
            self.cols,
            self.field.kind()
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<CycElt>> = Vec::deserialize(d)?;
        if rows.is_empty() || rows[0].is_empty() {
            return Err(D::Error::custom("empty matrix"));
        }
        let c = rows[0].len();
        if rows.iter().any(|r| r.len() != c) {
            return Err(D::Error::custom("ragged matrix"));
        }
        let field = rows[0][0].field().clone();
        if rows.iter().flatten().any(|x| *x.field() != field) {
            return Err(D::Error::custom("mixed fields"));
        }
        Ok(CycMatrix::from_rows(rows))
    }
}

/// `Σ x_i · y_i`.
pub fn dot(x: &[CycElt], y: &[CycElt]) -> CycElt {
    let field = x[0].field();
    let mut acc = field.zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * b);
        }
    }
    acc
}

pub fn vec_conjugate(x: &[CycElt]) -> CycVector {
    x.iter().map(|c| c.conjugate()).collect()
}

pub fn vec_scale(x: &[CycElt], s: &CycElt) -> CycVector {
    x.iter().map(|c| c * s).collect()
}

pub fn vec_add(x: &[CycElt], y: &[CycElt]) -> CycVector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(x: &[CycElt], y: &[CycElt]) -> CycVector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn unit_vector(field: &FieldDescriptor, n: usize, i: usize) -> CycVector {
    (0..n)
        .map(|j| if i == j { field.one() } else { field.zero() })
        .collect()
}

/// The nonzero `c` with `y = c·x`, if any.
pub fn proportional(x: &[CycElt], y: &[CycElt]) -> Option<CycElt> {
    let i = x.iter().position(|c| !c.is_zero())?;
    let c = &y[i] * &x[i].inverse()?;
    (!c.is_zero() && x.iter().zip(y).all(|(a, b)| &(a * &c) == b)).then_some(c)
}
