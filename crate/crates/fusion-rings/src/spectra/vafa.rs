//! T-matrix exponent candidates from the Vafa equations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ring::FusionRing;
use crate::spectra::snf::smith_normal_form;

/// Solutions modulo 1 of the log-linearized Vafa system.
#[derive(Clone, Debug)]
pub struct VafaCandidates {
    /// Exponent vectors `(t_1..t_r)` with entries in `[0,1)` and `t_1 = 0`;
    /// the torsion part of the solution set, one vector per coset.
    pub exponents: Vec<Vec<BigRational>>,
    /// True when the system leaves continuous directions open; only torsion
    /// representatives (free coordinates pinned to zero) are listed then.
    pub infinite_family: bool,
}

/// Solves the Vafa equations for `ring`.
///
/// Every quadruple `(i,j,k,l)` contributes the integer congruence
/// `W (t_i+t_j+t_k+t_l) - sum_n (N_ij^n N_ln^k* + N_jk^n N_ln^i* + N_ik^n N_ln^j*) t_n = 0 (mod 1)`
/// with `W = sum_n N_ij^n* N_kl^n`, plus `t_1 = 0 (mod 1)`. The distinct
/// rows are compressed to a basis of the row lattice and solved with a Smith
/// decomposition: writing `t = W y`, each diagonal entry `d` frees `y` to
/// range over `{0, 1/d, .., (d-1)/d}`.
pub fn vafa_candidates(ring: &FusionRing) -> VafaCandidates {
    let r = ring.rank();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut unit = vec![0i64; r];
    unit[0] = 1;
    rows.push(unit);
    for i in 1..=r {
        for j in 1..=r {
            for k in 1..=r {
                for l in 1..=r {
                    let w: i64 = (1..=r)
                        .map(|n| (ring.n(i, j, ring.dual(n)) * ring.n(k, l, n)) as i64)
                        .sum();
                    let mut row = vec![0i64; r];
                    row[i - 1] += w;
                    row[j - 1] += w;
                    row[k - 1] += w;
                    row[l - 1] += w;
                    for n in 1..=r {
                        let c = ring.n(i, j, n) * ring.n(l, n, ring.dual(k))
                            + ring.n(j, k, n) * ring.n(l, n, ring.dual(i))
                            + ring.n(i, k, n) * ring.n(l, n, ring.dual(j));
                        row[n - 1] -= c as i64;
                    }
                    if row.iter().any(|&v| v != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows.sort();
    rows.dedup();

    let basis = row_lattice_basis(&rows, r);
    let k = basis.len();
    let snf = smith_normal_form(&basis);
    let diag = snf.diagonal();

    // t = W y with d_t * y_t integral; y beyond the lattice rank is free.
    let mut exponents = Vec::new();
    let mut counters = vec![BigInt::zero(); k];
    loop {
        let y: Vec<BigRational> = (0..r)
            .map(|t| {
                if t < k {
                    BigRational::new(counters[t].clone(), diag[t].clone())
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let t_vec: Vec<BigRational> = (0..r)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, yj) in y.iter().enumerate() {
                    if !yj.is_zero() {
                        acc += BigRational::from(snf.w[i][j].clone()) * yj;
                    }
                }
                mod_one(acc)
            })
            .collect();
        exponents.push(t_vec);
        // Odometer over the torsion coordinates.
        let mut pos = k;
        while pos > 0 {
            counters[pos - 1] += 1;
            if counters[pos - 1] < diag[pos - 1] {
                break;
            }
            counters[pos - 1] = BigInt::zero();
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    exponents.sort();
    VafaCandidates { exponents, infinite_family: k < r }
}

/// Basis of the lattice spanned by integer rows, by echelon insertion with
/// extended-gcd pivot combination. At most `r` rows survive.
fn row_lattice_basis(rows: &[Vec<i64>], r: usize) -> Vec<Vec<BigInt>> {
    let mut pivots: Vec<Option<Vec<BigInt>>> = vec![None; r];
    for row in rows {
        let mut v: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        for c in 0..r {
            if v[c].is_zero() {
                continue;
            }
            match &pivots[c] {
                None => {
                    if v[c].is_negative() {
                        for x in &mut v {
                            *x = -x.clone();
                        }
                    }
                    pivots[c] = Some(v);
                    break;
                }
                Some(p) => {
                    if (&v[c] % &p[c]).is_zero() {
                        let q = &v[c] / &p[c];
                        for (x, px) in v.iter_mut().zip(p) {
                            *x -= &q * px;
                        }
                    } else {
                        let e = v[c].extended_gcd(&p[c]);
                        let (pc_g, vc_g) = (&p[c] / &e.gcd, &v[c] / &e.gcd);
                        let p = p.clone();
                        let combo: Vec<BigInt> = v
                            .iter()
                            .zip(&p)
                            .map(|(x, px)| &e.x * x + &e.y * px)
                            .collect();
                        let reduced: Vec<BigInt> = v
                            .iter()
                            .zip(&p)
                            .map(|(x, px)| &pc_g * x - &vc_g * px)
                            .collect();
                        pivots[c] = Some(combo);
                        v = reduced;
                    }
                }
            }
        }
    }
    pivots.into_iter().flatten().collect()
}

/// Fractional part in `[0,1)`.
fn mod_one(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> FusionRing {
        FusionRing::new(2, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]], &[1, 2])
            .unwrap()
    }

    fn z2() -> FusionRing {
        FusionRing::new(2, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]], &[1, 2])
            .unwrap()
    }

    fn z3() -> FusionRing {
        FusionRing::new(
            3,
            &[
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
                vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
            ],
            &[1, 3, 2],
        )
        .unwrap()
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Exact replay of every congruence against a candidate.
    fn satisfies_all(ring: &FusionRing, t: &[BigRational]) -> bool {
        let r = ring.rank();
        if !t[0].is_zero() {
            return false;
        }
        for i in 1..=r {
            for j in 1..=r {
                for k in 1..=r {
                    for l in 1..=r {
                        let w: i64 = (1..=r)
                            .map(|n| (ring.n(i, j, ring.dual(n)) * ring.n(k, l, n)) as i64)
                            .sum();
                        let mut acc = BigRational::from(BigInt::from(w))
                            * (&t[i - 1] + &t[j - 1] + &t[k - 1] + &t[l - 1]);
                        for n in 1..=r {
                            let c = ring.n(i, j, n) * ring.n(l, n, ring.dual(k))
                                + ring.n(j, k, n) * ring.n(l, n, ring.dual(i))
                                + ring.n(i, k, n) * ring.n(l, n, ring.dual(j));
                            acc -= BigRational::from(BigInt::from(c as i64)) * &t[n - 1];
                        }
                        if !acc.is_integer() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn trivial_ring_has_only_zero() {
        let ring = FusionRing::new(1, &[vec![vec![1]]], &[1]).unwrap();
        let out = vafa_candidates(&ring);
        assert!(!out.infinite_family);
        assert_eq!(out.exponents, vec![vec![BigRational::zero()]]);
    }

    #[test]
    fn z2_gives_quarter_steps() {
        let out = vafa_candidates(&z2());
        assert!(!out.infinite_family);
        let mut seen: Vec<BigRational> = out.exponents.iter().map(|t| t[1].clone()).collect();
        seen.sort();
        assert_eq!(seen, vec![frac(0, 1), frac(1, 4), frac(1, 2), frac(3, 4)]);
        for t in &out.exponents {
            assert!(t[0].is_zero());
            assert!(satisfies_all(&z2(), t));
        }
    }

    #[test]
    fn fibonacci_contains_two_fifths() {
        let out = vafa_candidates(&fib());
        assert!(!out.infinite_family);
        let seen: Vec<BigRational> = out.exponents.iter().map(|t| t[1].clone()).collect();
        assert!(seen.contains(&frac(2, 5)));
        assert!(seen.contains(&frac(3, 5)));
        for t in &out.exponents {
            assert!(satisfies_all(&fib(), t));
        }
    }

    #[test]
    fn z3_candidates_replay_exactly() {
        let ring = z3();
        let out = vafa_candidates(&ring);
        assert!(!out.infinite_family);
        assert!(!out.exponents.is_empty());
        for t in &out.exponents {
            assert!(t[0].is_zero());
            assert!(satisfies_all(&ring, t));
        }
    }

    #[test]
    fn candidate_set_is_complete_for_z2() {
        // Scan the quarter grid by brute force; nothing outside the
        // returned set may satisfy the congruences.
        let ring = z2();
        let out = vafa_candidates(&ring);
        for num in 0..16 {
            let t = vec![BigRational::zero(), frac(num, 16)];
            let listed = out.exponents.contains(&t);
            assert_eq!(satisfies_all(&ring, &t), listed, "mismatch at t2 = {num}/16");
        }
    }
}
