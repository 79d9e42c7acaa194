//! Smith normal form over exact integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Decomposition `u * a * w = d` with `u`, `w` unimodular and `d` diagonal
/// with non-negative entries satisfying `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub w: Vec<Vec<BigInt>>,
}

impl Snf {
    /// Diagonal entries `d_1..d_min(m,n)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.w.len())).map(|i| self.d[i][i].clone()).collect()
    }
}

/// Computes the Smith normal form of an integer matrix by elementary row and
/// column operations, entirely in exact arithmetic.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    assert!(a.iter().all(|row| row.len() == n), "ragged matrix");
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = eye(m);
    let mut w = eye(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = pivot(&d, t) else {
                // The trailing block is zero; the form is final.
                return finish(u, d, w, t);
            };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut w, t, pj);
            let mut dirty = false;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_sub(&mut d, &mut u, i, t, &q);
                    dirty = dirty || !d[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_sub(&mut d, &mut w, j, t, &q);
                    dirty = dirty || !d[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // Fold any entry the pivot does not divide into the pivot column
            // so the divisibility chain comes out right.
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((_, j)) => {
                    col_add(&mut d, &mut w, t, j);
                }
                None => break,
            }
        }
    }
    finish(u, d, w, m.min(n))
}

/// Smallest-magnitude nonzero entry in the trailing block, lexicographic on
/// position to keep the reduction deterministic.
fn pivot(d: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => v.abs() < d[bi][bj].abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

fn finish(mut u: Vec<Vec<BigInt>>, mut d: Vec<Vec<BigInt>>, w: Vec<Vec<BigInt>>, upto: usize) -> Snf {
    for t in 0..upto {
        if d[t][t].is_negative() {
            for v in &mut d[t] {
                *v = -v.clone();
            }
            for v in &mut u[t] {
                *v = -v.clone();
            }
        }
    }
    Snf { u, d, w }
}

fn eye(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_rows(d: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        d.swap(a, b);
        u.swap(a, b);
    }
}

fn swap_cols(d: &mut [Vec<BigInt>], w: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in d.iter_mut() {
        row.swap(a, b);
    }
    for row in w.iter_mut() {
        row.swap(a, b);
    }
}

/// `row_i -= q * row_t` on `d`, mirrored on `u`.
fn row_sub(d: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    for j in 0..d[t].len() {
        let v = q * &d[t][j];
        d[i][j] -= v;
    }
    for j in 0..u[t].len() {
        let v = q * &u[t][j];
        u[i][j] -= v;
    }
}

/// `col_j -= q * col_t` on `d`, mirrored on `w`.
fn col_sub(d: &mut [Vec<BigInt>], w: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in d.iter_mut() {
        let v = q * &row[t];
        row[j] -= v;
    }
    for row in w.iter_mut() {
        let v = q * &row[t];
        row[j] -= v;
    }
}

/// `col_t += col_j` on `d`, mirrored on `w`.
fn col_add(d: &mut [Vec<BigInt>], w: &mut [Vec<BigInt>], t: usize, j: usize) {
    for row in d.iter_mut() {
        let v = row[j].clone();
        row[t] += v;
    }
    for row in w.iter_mut() {
        let v = row[j].clone();
        row[t] += v;
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let (m, k, n) = (a.len(), b.len(), b[0].len());
        (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum::<BigInt>())
                    .collect()
            })
            .collect()
    }

    fn check(a: &[Vec<BigInt>]) -> Snf {
        let snf = smith_normal_form(a);
        if !a.is_empty() && !a[0].is_empty() {
            assert_eq!(matmul(&matmul(&snf.u, a), &snf.w), snf.d, "U*A*W != D");
        }
        assert_eq!(determinant(&snf.u).magnitude(), BigInt::one().magnitude());
        assert_eq!(determinant(&snf.w).magnitude(), BigInt::one().magnitude());
        let diag = snf.diagonal();
        for (i, j) in (0..diag.len()).zip(1..diag.len()) {
            assert!(!diag[i].is_negative() && !diag[j].is_negative());
            if !diag[j].is_zero() {
                assert!(
                    !diag[i].is_zero() && (&diag[j] % &diag[i]).is_zero(),
                    "divisibility broken: {diag:?}"
                );
            }
        }
        for (i, row) in snf.d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    assert!(v.is_zero(), "off-diagonal residue at ({i},{j})");
                }
            }
        }
        snf
    }

    #[test]
    fn diag_two_three_becomes_one_six() {
        let snf = check(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_is_fixed_point() {
        let snf = check(&big(&[&[0, 0, 0], &[0, 0, 0]]));
        assert_eq!(snf.diagonal(), vec![BigInt::zero(), BigInt::zero()]);
        assert_eq!(snf.u, big(&[&[1, 0], &[0, 1]]));
        assert_eq!(snf.w, big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn unit_matrix() {
        let snf = check(&big(&[&[1]]));
        assert_eq!(snf.diagonal(), vec![BigInt::one()]);
    }

    #[test]
    fn rectangular_example() {
        let snf = check(&big(&[&[2, 4, 4], &[-6, 6, 12]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn assorted_shapes_decompose_exactly() {
        for a in [
            big(&[&[3, 1, -4], &[2, -3, 1], &[-4, 4, 0]]),
            big(&[&[1, 2], &[2, 4]]),
            big(&[&[5]]),
            big(&[&[0, 7], &[-7, 0], &[14, 21]]),
            big(&[&[6, 10, 15]]),
            big(&[&[-2]]),
        ] {
            check(&a);
        }
    }

    #[test]
    fn gcd_row_appears() {
        // gcd(6,10,15) = 1, so the first invariant factor is 1.
        let snf = check(&big(&[&[6, 10, 15]]));
        assert_eq!(snf.diagonal(), vec![BigInt::one()]);
    }

    #[test]
    fn determinant_matches_product_of_invariants() {
        let a = big(&[&[3, 1, -4], &[2, -3, 1], &[-4, 4, 0]]);
        let snf = check(&a);
        let prod: BigInt = snf.diagonal().iter().product();
        assert_eq!(determinant(&a).magnitude(), prod.magnitude());
    }
}
