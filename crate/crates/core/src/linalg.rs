//! Exact dense linear algebra over ℤ, ℚ and prime fields.
//!
//! Everything here works on small matrices (at most a few dozen rows), so the
//! routines favour clarity over asymptotic speed. Integer elimination runs in
//! `i128` and is converted back at the end.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Rational;

pub type IntMatrix = Vec<Vec<i64>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let s: i128 = (0..inner).map(|k| row[k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(s).expect("integer matrix product overflow")
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
}

/// Inverse of a nonsingular integer matrix over ℚ.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer(i128::from(i == j))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..2 * n {
                    let t = a[c][j] * f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(
        a.into_iter()
            .map(|row| row[n..].iter().map(narrow_ratio).collect())
            .collect(),
    )
}

pub(crate) fn narrow_ratio(x: &Ratio<i128>) -> Rational {
    Rational::new(
        i64::try_from(*x.numer()).expect("rational overflow"),
        i64::try_from(*x.denom()).expect("rational overflow"),
    )
}

/// Reduced row echelon form over ℚ; returns the matrix and its pivot columns.
pub fn rref_q(m: &[Vec<Rational>]) -> (RatMatrix, Vec<usize>) {
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| Ratio::new(*x.numer() as i128, *x.denom() as i128))
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..cols {
                    let t = a[r][j] * f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (
        a.iter().map(|row| row.iter().map(narrow_ratio).collect()).collect(),
        pivots,
    )
}

pub fn to_rational(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect()
}

pub fn rank_q(m: &[Vec<i64>]) -> usize {
    rref_q(&to_rational(m)).1.len()
}

/// Basis of the right kernel `{x : m x = 0}` over ℚ, one vector per free column,
/// in reduced form (the free coordinate equals one).
pub fn nullspace_q(m: &[Vec<i64>], cols: usize) -> RatMatrix {
    let (r, pivots) = rref_q(&to_rational(m));
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f];
            }
            v
        })
        .collect()
}

/// Reduced row echelon form modulo a prime.
pub fn rref_mod_p(m: &[Vec<i64>], p: i64) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut a: Vec<Vec<i64>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = mod_inverse(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let g = a.extended_gcd(&p);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(p)
}

/// Right kernel of `m` over 𝔽_p, one basis vector per free column.
pub fn nullspace_mod_p(m: &[Vec<i64>], cols: usize, p: i64) -> Vec<Vec<i64>> {
    let (r, pivots) = rref_mod_p(m, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = (-row[f]).rem_euclid(p);
            }
            v
        })
        .collect()
}

/// Smith normal form with unimodular witnesses: `left · m · right = diag`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// Diagonal entries, `min(rows, cols)` of them, nonzero ones first.
    pub diag: Vec<i64>,
    pub rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Inverse of `right`, kept because coset coordinates need it.
    #[serde(skip)]
    pub right_inv: IntMatrix,
}

impl SnfResult {
    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.diag[..self.rank]
    }

    pub fn diag_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = vec![vec![0; cols]; rows];
        for (i, &x) in self.diag.iter().enumerate() {
            d[i][i] = x;
        }
        d
    }
}

/// Classical elimination, always pivoting on the smallest nonzero entry.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SnfResult {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let id = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    let mut left = id(rows);
    let mut right = id(cols);
    let mut right_inv = id(cols);

    // Column operation helpers keep `right_inv` in sync: if right ← right·E then
    // right_inv ← E⁻¹·right_inv.
    fn col_swap(a: &mut [Vec<i128>], r: &mut [Vec<i128>], ri: &mut [Vec<i128>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in r.iter_mut() {
            row.swap(i, j);
        }
        ri.swap(i, j);
    }
    // column j += f * column i
    fn col_add(a: &mut [Vec<i128>], r: &mut [Vec<i128>], ri: &mut [Vec<i128>], j: usize, i: usize, f: i128) {
        for row in a.iter_mut() {
            row[j] += f * row[i];
        }
        for row in r.iter_mut() {
            row[j] += f * row[i];
        }
        // E = I + f e_i e_j^T, E⁻¹ = I - f e_i e_j^T: row i of ri -= f * row j
        let rj = ri[j].clone();
        for (x, y) in ri[i].iter_mut().zip(rj) {
            *x -= f * y;
        }
    }
    fn col_neg(a: &mut [Vec<i128>], r: &mut [Vec<i128>], ri: &mut [Vec<i128>], i: usize) {
        for row in a.iter_mut() {
            row[i] = -row[i];
        }
        for row in r.iter_mut() {
            row[i] = -row[i];
        }
        for x in ri[i].iter_mut() {
            *x = -*x;
        }
    }

    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            if pi != t {
                a.swap(pi, t);
                left.swap(pi, t);
            }
            if pj != t {
                col_swap(&mut a, &mut right, &mut right_inv, pj, t);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &p);
                    for j in 0..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..rows {
                        left[i][j] -= q * left[t][j];
                    }
                    dirty |= a[i][t] != 0;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &p);
                    col_add(&mut a, &mut right, &mut right_inv, j, t, -q);
                    dirty |= a[t][j] != 0;
                }
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            if let Some(i) = bad {
                for j in 0..cols {
                    a[t][j] += a[i][j];
                }
                for j in 0..rows {
                    left[t][j] += left[i][j];
                }
                continue;
            }
            break;
        }
        if a[t][t] == 0 {
            break;
        }
        if a[t][t] < 0 {
            col_neg(&mut a, &mut right, &mut right_inv, t);
        }
        rank += 1;
    }
    let conv = |m: Vec<Vec<i128>>| -> IntMatrix {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("SNF overflow")).collect())
            .collect()
    };
    let diag = (0..n).map(|i| i64::try_from(a[i][i]).expect("SNF overflow")).collect();
    SnfResult {
        diag,
        rank,
        left: conv(left),
        right: conv(right),
        right_inv: conv(right_inv),
    }
}

/// Basis of the saturated integer kernel `{x ∈ ℤ^cols : m x = 0}`.
pub fn integer_kernel(m: &[Vec<i64>], cols: usize) -> IntMatrix {
    if m.is_empty() {
        return identity(cols);
    }
    let snf = smith_normal_form(m);
    (snf.rank..cols)
        .map(|j| snf.right.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn gcd_slice(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Scale a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |l, x| l.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = gcd_slice(&ints);
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max(m: &[Vec<i64>]) -> i64 {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &[Vec<i64>]) -> SnfResult {
        let s = smith_normal_form(m);
        let rows = m.len();
        let cols = m[0].len();
        assert_eq!(mat_mul(&mat_mul(&s.left, m), &s.right), s.diag_matrix(rows, cols));
        assert_eq!(determinant(&s.left).abs(), 1);
        assert_eq!(determinant(&s.right).abs(), 1);
        assert_eq!(mat_mul(&s.right, &s.right_inv), identity(cols));
        for w in s.invariant_factors().windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&identity(3));
        assert_eq!(s.diag, vec![1, 1, 1]);
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn snf_two_by_two() {
        // Hand reduction: gcd of entries is 2, determinant is -8, so (2, 4).
        let s = check_snf(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(s.diag, vec![2, 4]);
    }

    #[test]
    fn snf_rank_deficient() {
        let s = check_snf(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.diag[2], 0);
    }

    #[test]
    fn determinant_by_cofactors() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(determinant(&m), 4);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn kernels() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let k = nullspace_q(&m, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive_integer(&k[0]), vec![1, -1, 1]);
        let kz = integer_kernel(&m, 3);
        assert_eq!(kz.len(), 1);
        assert_eq!(kz[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1, 1]);
        // x + y + z = 0 over F_3 has a 2-dimensional kernel.
        assert_eq!(nullspace_mod_p(&[vec![1, 1, 1]], 3, 3).len(), 2);
        // 2x = 0 over F_2 is no constraint.
        assert_eq!(nullspace_mod_p(&[vec![2, 0]], 2, 2).len(), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![-2, 1], vec![1, -2]];
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv[0][0], Rational::new(-2, 3));
        assert_eq!(inv[0][1], Rational::new(-1, 3));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn snf_witnesses_hold(entries in proptest::collection::vec(-6i64..=6, 12)) {
            let m: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            check_snf(&m);
        }
    }
}
