//! Small dense linear algebra over `Q` and `Z`.
//!
//! Everything here is exact. Matrices are row-major `Vec<Vec<_>>`; sizes in this
//! crate never exceed a few dozen rows, except for multiplication matrices of
//! large cyclotomic fields which only go through [`rational_det`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMatrix = Vec<Vec<BigRational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves `a * x = b` for square invertible `a`. Returns `None` when `a` is singular.
pub fn rational_solve(a: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for entry in m[col].iter_mut().skip(col) {
            *entry = &*entry * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Solves the overdetermined but consistent system `a * x = b` (`a` is `rows x cols`,
/// full column rank). Returns `None` if inconsistent or rank deficient.
pub fn rational_solve_consistent(a: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prow = 0;
    for col in 0..cols {
        let piv = (prow..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(prow, piv);
        let inv = m[prow][col].recip();
        for entry in m[prow].iter_mut() {
            *entry = &*entry * &inv;
        }
        for r in 0..rows {
            if r != prow && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=cols {
                    let delta = &f * &m[prow][c];
                    m[r][c] -= delta;
                }
            }
        }
        prow += 1;
    }
    if m[prow..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

pub fn rational_det(a: &QMatrix) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_det(a: &ZMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, piv);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `gens`.
///
/// Returns the nonzero rows in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(gens: &ZMatrix) -> ZMatrix {
    let Some(cols) = gens.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut m: ZMatrix = gens
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut prow = 0;
    for col in 0..cols {
        if prow >= m.len() {
            break;
        }
        // gcd-combine all entries in this column below prow into prow
        loop {
            let nonzero: Vec<usize> = (prow..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| m[r][col].abs()).unwrap();
            m.swap(prow, best);
            if nonzero.len() == 1 {
                break;
            }
            for r in prow + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].div_floor(&m[prow][col]);
                for c in col..cols {
                    let delta = &f * &m[prow][c];
                    m[r][c] -= delta;
                }
            }
        }
        if m[prow][col].is_zero() {
            continue;
        }
        if m[prow][col].is_negative() {
            for x in m[prow].iter_mut() {
                *x = -&*x;
            }
        }
        for r in 0..prow {
            let f = m[r][col].div_floor(&m[prow][col]);
            if f.is_zero() {
                continue;
            }
            for c in col..cols {
                let delta = &f * &m[prow][c];
                m[r][c] -= delta;
            }
        }
        prow += 1;
    }
    m.truncate(prow);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Basis of the integer kernel `{x in Z^n : a x = 0}` of an `m x n` integer matrix.
pub fn integer_kernel(a: &ZMatrix, n: usize) -> ZMatrix {
    let m_rows = a.len();
    // rows of [a^T | I_n]
    let mut aug: ZMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..m_rows).map(|r| a[r][i].clone()).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let width = m_rows + n;
    let mut prow = 0;
    for col in 0..m_rows {
        loop {
            let nonzero: Vec<usize> = (prow..n).filter(|&r| !aug[r][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| aug[r][col].abs()).unwrap();
            aug.swap(prow, best);
            if nonzero.len() == 1 {
                break;
            }
            for r in prow + 1..n {
                if aug[r][col].is_zero() {
                    continue;
                }
                let f = aug[r][col].div_floor(&aug[prow][col]);
                for c in 0..width {
                    let delta = &f * &aug[prow][c];
                    aug[r][c] -= delta;
                }
            }
        }
        if prow < n && !aug[prow][col].is_zero() {
            prow += 1;
        }
    }
    aug.into_iter()
        .filter(|row| row[..m_rows].iter().all(|x| x.is_zero()))
        .map(|row| row[m_rows..].to_vec())
        .collect()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_redundant_generators() {
        let h = hermite_rows(&z(&[&[2, 0], &[0, 3], &[1, 1]]));
        assert_eq!(h, z(&[&[1, 0], &[0, 1]]));
        let h = hermite_rows(&z(&[&[4, 6], &[6, 9]]));
        assert_eq!(h, z(&[&[2, 3]]));
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&z(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip([2, 4, 6]).map(|(x, c)| x * c).sum();
            assert!(s.is_zero());
        }
        // the kernel of (2 4 6) is generated by (-2,1,0), (-3,0,1): index 1 in Z^2 sense
        let h = hermite_rows(&k);
        let minor = &h[0][1] * &h[1][2] - &h[0][2] * &h[1][1];
        assert_eq!(minor.abs(), BigInt::one());
    }

    #[test]
    fn bareiss_matches_rational_det() {
        let a = z(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let qa: QMatrix = a
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        assert_eq!(
            BigRational::from_integer(integer_det(&a)),
            rational_det(&qa)
        );
        assert_eq!(integer_det(&a), BigInt::from(-90));
    }
}
