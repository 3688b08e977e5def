//! The ring `Z[λ] = O_F` of integers of `F = Q(√5)`, `λ = ζ_5 + ζ_5^{-1}`,
//! `λ² = 1 − λ`. It is norm-Euclidean, which gives Hermite normal forms over it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::{CycElt, RealElt};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ZLambda {
    pub a: i128,
    pub b: i128,
}

impl fmt::Debug for ZLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}λ", self.a, self.b)
    }
}

impl ZLambda {
    pub const ZERO: ZLambda = ZLambda { a: 0, b: 0 };
    pub const ONE: ZLambda = ZLambda { a: 1, b: 0 };
    pub const LAMBDA: ZLambda = ZLambda { a: 0, b: 1 };

    pub fn new(a: i128, b: i128) -> Self {
        ZLambda { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `N(a + bλ) = a² − ab − b²`.
    pub fn norm(&self) -> i128 {
        self.a * self.a - self.a * self.b - self.b * self.b
    }

    /// Galois conjugate `λ ↦ −1 − λ`.
    pub fn conj(&self) -> Self {
        ZLambda {
            a: self.a - self.b,
            b: -self.b,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs() == 1
    }

    /// Quotient rounded to the nearest lattice point; `|N(x − q y)| < |N(y)|`.
    pub fn div_round(&self, y: &Self) -> Self {
        let n = y.norm();
        assert!(n != 0, "division by zero in Z[λ]");
        let num = *self * y.conj();
        ZLambda {
            a: round_div(num.a, n),
            b: round_div(num.b, n),
        }
    }

    pub fn divides(&self, x: &Self) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        let n = self.norm();
        let num = *x * self.conj();
        num.a % n == 0 && num.b % n == 0
    }

    pub fn exact_div(&self, y: &Self) -> Option<Self> {
        y.divides(self).then(|| {
            let n = y.norm();
            let num = *self * y.conj();
            ZLambda {
                a: num.a / n,
                b: num.b / n,
            }
        })
    }

    pub fn to_elt(&self) -> CycElt {
        RealElt::from_golden(
            BigRational::from_integer(self.a.into()),
            BigRational::from_integer(self.b.into()),
        )
        .into_elt()
    }

    /// From an integral real element of `Q(ζ_5)`.
    pub fn from_real(x: &RealElt) -> Option<Self> {
        let (u, v) = x.golden()?;
        if !u.is_integer() || !v.is_integer() {
            return None;
        }
        Some(ZLambda {
            a: u.to_integer().to_i128()?,
            b: v.to_integer().to_i128()?,
        })
    }

    pub fn from_elt(x: &CycElt) -> Option<Self> {
        Self::from_real(&RealElt::new(x.clone()).ok()?)
    }

    /// Value at the place where `λ = (√5 − 1)/2` (`place = 0`) or `(−1 − √5)/2`.
    pub fn value_at(&self, place: usize) -> f64 {
        let s5 = 5f64.sqrt();
        let l = if place == 0 {
            (s5 - 1.0) / 2.0
        } else {
            (-1.0 - s5) / 2.0
        };
        self.a as f64 + self.b as f64 * l
    }
}

fn round_div(a: i128, n: i128) -> i128 {
    // nearest integer to a / n
    let (a, n) = if n < 0 { (-a, -n) } else { (a, n) };
    (2 * a + n).div_euclid(2 * n)
}

impl Add for ZLambda {
    type Output = ZLambda;
    fn add(self, o: ZLambda) -> ZLambda {
        ZLambda {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl Sub for ZLambda {
    type Output = ZLambda;
    fn sub(self, o: ZLambda) -> ZLambda {
        ZLambda {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }
}

impl Neg for ZLambda {
    type Output = ZLambda;
    fn neg(self) -> ZLambda {
        ZLambda {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for ZLambda {
    type Output = ZLambda;
    fn mul(self, o: ZLambda) -> ZLambda {
        // (a + bλ)(c + dλ) = ac + bd λ² + (ad + bc)λ, λ² = 1 − λ
        let bd = self.b * o.b;
        ZLambda {
            a: self.a * o.a + bd,
            b: self.a * o.b + self.b * o.a - bd,
        }
    }
}

/// Row Hermite normal form over `Z[λ]`: the nonzero rows of an echelon basis of
/// the `Z[λ]`-module spanned by `rows`.
pub fn hermite_rows(rows: &[Vec<ZLambda>]) -> Vec<Vec<ZLambda>> {
    let Some(cols) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<ZLambda>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut prow = 0;
    for col in 0..cols {
        if prow >= m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (prow..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&r| m[r][col].norm().abs()).unwrap();
            m.swap(prow, best);
            if nz.len() == 1 {
                break;
            }
            for r in prow + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let qt = m[r][col].div_round(&m[prow][col]);
                for c in col..cols {
                    let d = qt * m[prow][c];
                    m[r][c] = m[r][c] - d;
                }
            }
        }
        if m[prow][col].is_zero() {
            continue;
        }
        for r in 0..prow {
            let qt = m[r][col].div_round(&m[prow][col]);
            if qt.is_zero() {
                continue;
            }
            for c in col..cols {
                let d = qt * m[prow][c];
                m[r][c] = m[r][c] - d;
            }
        }
        prow += 1;
    }
    m.truncate(prow);
    m
}

pub fn lcm_denominator(xs: &[BigRational]) -> num_bigint::BigInt {
    crate::linalg::lcm_of_denominators(xs.iter().filter(|x| !x.is_zero()))
}
