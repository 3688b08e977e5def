//! Linear algebra over the prime field `F_5`.

pub type F5Matrix = Vec<Vec<u8>>;

pub fn reduce(x: i64) -> u8 {
    x.rem_euclid(5) as u8
}

pub fn inv(a: u8) -> u8 {
    match a % 5 {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        _ => panic!("0 has no inverse mod 5"),
    }
}

/// Nonzero squares mod 5 are `{1, 4}`.
pub fn is_square(a: u8) -> bool {
    matches!(a % 5, 1 | 4)
}

pub fn mat_mul(a: &F5Matrix, b: &F5Matrix) -> F5Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| ((0..k).map(|l| a[i][l] as u32 * b[l][j] as u32).sum::<u32>() % 5) as u8)
                .collect()
        })
        .collect()
}

pub fn transpose(a: &F5Matrix) -> F5Matrix {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn det(a: &F5Matrix) -> u8 {
    let n = a.len();
    let mut m = a.clone();
    let mut det: u32 = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(col, piv);
            det = det * 4 % 5;
        }
        det = det * m[col][col] as u32 % 5;
        let p = inv(m[col][col]);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = m[r][col] as u32 * p as u32 % 5;
            for c in col..n {
                m[r][c] = ((m[r][c] as u32 + 5 * 5 - f * m[col][c] as u32) % 5) as u8;
            }
        }
    }
    det as u8
}

/// Basis of `{x : a x = 0}` (column vectors).
pub fn kernel(a: &F5Matrix, ncols: usize) -> Vec<Vec<u8>> {
    let mut m = a.clone();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..ncols {
        let Some(piv) = (prow..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(prow, piv);
        let p = inv(m[prow][col]);
        for c in 0..ncols {
            m[prow][c] = (m[prow][c] as u32 * p as u32 % 5) as u8;
        }
        for r in 0..rows {
            if r != prow && m[r][col] != 0 {
                let f = m[r][col] as u32;
                for c in 0..ncols {
                    m[r][c] = ((m[r][c] as u32 + 25 - f * m[prow][c] as u32) % 5) as u8;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ((5 - m[r][f] as u32) % 5) as u8;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_kernel() {
        let a = vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 0, 3]];
        assert_eq!(det(&a), 0);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for row in &a {
            assert_eq!(
                row.iter()
                    .zip(v)
                    .map(|(x, y)| *x as u32 * *y as u32)
                    .sum::<u32>()
                    % 5,
                0
            );
        }
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), 4);
        assert!(is_square(4) && !is_square(3) && !is_square(2));
    }
}
