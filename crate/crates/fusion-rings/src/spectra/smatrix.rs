//! S-matrix extraction from character tables.

use std::cmp::Ordering;

use astro_float::BigFloat;

use crate::precision::{self, CMat, Cpx, Ctx};
use crate::ring::FusionRing;
use crate::spectra::character::CharacterTable;

/// All S-matrices of `ring` obtainable from `table`.
///
/// A valid S-matrix assigns character rows to positions, row `i` carrying
/// the scale `d_i / sqrt(D^2)`, with the Frobenius-Perron row pinned to
/// position 1 so that `S[1][i] = S[i][1] = d_i / sqrt(D^2)`. Assignments
/// are searched with symmetry pruning; survivors are kept when S is
/// symmetric and unitary and `S^2` matches the charge conjugation matrix,
/// all entrywise within `tol`.
pub fn s_matrices(ring: &FusionRing, table: &CharacterTable, ctx: Ctx, tol: &BigFloat) -> Vec<CMat> {
    let r = ring.rank();
    debug_assert_eq!(table.rank, r);
    let mut global = ctx.zero();
    for x in table.fp_row() {
        global = ctx.add(&global, &x.abs2(ctx));
    }
    let sqrt_d = ctx.sqrt(&global);
    // scales[i] = d_{i+1} / sqrt(D^2)
    let scales: Vec<BigFloat> =
        (0..r).map(|i| ctx.div(&table.fp_row()[i].re, &sqrt_d)).collect();

    let mut results = Vec::new();
    let mut assignment = vec![0usize; r];
    let mut used = vec![false; r];
    used[0] = true;
    search(ring, table, &scales, ctx, tol, 1, &mut assignment, &mut used, &mut results);
    results
}

#[allow(clippy::too_many_arguments)]
fn search(
    ring: &FusionRing,
    table: &CharacterTable,
    scales: &[BigFloat],
    ctx: Ctx,
    tol: &BigFloat,
    pos: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    results: &mut Vec<CMat>,
) {
    let r = ring.rank();
    if pos == r {
        let s = build(table, scales, assignment, ctx);
        if accept(ring, &s, ctx, tol) {
            results.push(s);
        }
        return;
    }
    for row in 1..r {
        if used[row] {
            continue;
        }
        assignment[pos] = row;
        // S[pos][q] must equal S[q][pos] for every earlier position q.
        let ok = (0..pos).all(|q| {
            let spq = table.chars[row][q].scale(&scales[pos], ctx);
            let sqp = table.chars[assignment[q]][pos].scale(&scales[q], ctx);
            precision::cmp(&spq.sub(&sqp, ctx).abs(ctx), tol) != Ordering::Greater
        });
        if ok {
            used[row] = true;
            search(ring, table, scales, ctx, tol, pos + 1, assignment, used, results);
            used[row] = false;
        }
    }
}

fn build(table: &CharacterTable, scales: &[BigFloat], assignment: &[usize], ctx: Ctx) -> CMat {
    let rows: Vec<Vec<Cpx>> = assignment
        .iter()
        .enumerate()
        .map(|(pos, &row)| table.chars[row].iter().map(|x| x.scale(&scales[pos], ctx)).collect())
        .collect();
    CMat::from_rows(rows)
}

/// Unitarity and `S^2 = C` to tolerance; symmetry was enforced during the
/// search.
fn accept(ring: &FusionRing, s: &CMat, ctx: Ctx, tol: &BigFloat) -> bool {
    let r = ring.rank();
    let mut worst = ctx.zero();
    for i in 0..r {
        for j in 0..r {
            let mut acc = Cpx::zero(ctx);
            for k in 0..r {
                acc = acc.add(&s.at(i, k).mul(&s.at(j, k).conj(), ctx), ctx);
            }
            let expect = if i == j { Cpx::one(ctx) } else { Cpx::zero(ctx) };
            worst = precision::max(worst, acc.sub(&expect, ctx).abs(ctx));
        }
    }
    if precision::cmp(&worst, tol) == Ordering::Greater {
        return false;
    }
    let s2 = s.matmul(s, ctx);
    let mut worst = ctx.zero();
    for i in 0..r {
        for j in 0..r {
            let c = Cpx::real(ctx.int(ring.n(i + 1, j + 1, 1) as i64), ctx);
            worst = precision::max(worst, s2.at(i, j).sub(&c, ctx).abs(ctx));
        }
    }
    precision::cmp(&worst, tol) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::character::character_table;

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

    fn ising() -> FusionRing {
        FusionRing::new(
            3,
            &[
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
                vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]],
            ],
            &[1, 2, 3],
        )
        .unwrap()
    }

    /// Representation ring of S3: u*u = 1, u*v = v, v*v = 1 + u + v.
    fn rep_s3() -> FusionRing {
        FusionRing::new(
            3,
            &[
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
                vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
            ],
            &[1, 2, 3],
        )
        .unwrap()
    }

    fn search(ring: &FusionRing) -> (Vec<CMat>, Ctx, BigFloat) {
        let ctx = Ctx::from_digits(99);
        let tol = ctx.ten_pow(-30);
        let table = character_table(ring, 99, 17).unwrap();
        (s_matrices(ring, &table, ctx, &tol), ctx, tol)
    }

    fn entry_close(s: &CMat, i: usize, j: usize, want: &BigFloat, ctx: Ctx, tol: &BigFloat) -> bool {
        let d = s.at(i, j).sub(&Cpx::real(want.clone(), ctx), ctx);
        precision::cmp(&d.abs(ctx), tol) == Ordering::Less
    }

    #[test]
    fn fibonacci_s_matrix() {
        let (out, ctx, tol) = search(&fib());
        assert_eq!(out.len(), 1);
        let s = &out[0];
        let phi = ctx.div(&ctx.add(&ctx.one(), &ctx.sqrt(&ctx.int(5))), &ctx.int(2));
        let norm = ctx.sqrt(&ctx.add(&ctx.int(2), &phi));
        let a = ctx.div(&ctx.one(), &norm);
        let b = ctx.div(&phi, &norm);
        assert!(entry_close(s, 0, 0, &a, ctx, &tol));
        assert!(entry_close(s, 0, 1, &b, ctx, &tol));
        assert!(entry_close(s, 1, 0, &b, ctx, &tol));
        assert!(entry_close(s, 1, 1, &a.neg(), ctx, &tol));
    }

    #[test]
    fn z2_s_matrix() {
        let (out, ctx, tol) = search(&z2());
        assert_eq!(out.len(), 1);
        let s = &out[0];
        let h = ctx.div(&ctx.one(), &ctx.sqrt(&ctx.int(2)));
        assert!(entry_close(s, 0, 0, &h, ctx, &tol));
        assert!(entry_close(s, 0, 1, &h, ctx, &tol));
        assert!(entry_close(s, 1, 1, &h.neg(), ctx, &tol));
    }

    #[test]
    fn ising_s_matrix() {
        let (out, ctx, tol) = search(&ising());
        assert_eq!(out.len(), 1);
        let s = &out[0];
        let half = ctx.parse("0.5");
        let rt = ctx.div(&ctx.sqrt(&ctx.int(2)), &ctx.int(2));
        assert!(entry_close(s, 0, 0, &half, ctx, &tol));
        assert!(entry_close(s, 0, 2, &rt, ctx, &tol));
        assert!(entry_close(s, 2, 2, &ctx.zero(), ctx, &tol));
        assert!(entry_close(s, 1, 2, &rt.neg(), ctx, &tol));
    }

    #[test]
    fn z3_s_matrix_exists_and_diagonalizes() {
        let (out, ctx, tol) = search(&z3());
        assert!(!out.is_empty());
        let ring = z3();
        for s in &out {
            // First row and column carry the dimensions over sqrt(D^2).
            let want = ctx.div(&ctx.one(), &ctx.sqrt(&ctx.int(3)));
            for i in 0..3 {
                assert!(entry_close(s, 0, i, &want, ctx, &tol));
                assert!(entry_close(s, i, 0, &want, ctx, &tol));
            }
            // S^dagger N_a S is diagonal for every fusion matrix.
            let mut sdag = CMat::zeros(3, ctx);
            for i in 0..3 {
                for j in 0..3 {
                    *sdag.at_mut(i, j) = s.at(j, i).conj();
                }
            }
            for m in ring.fusion_matrices() {
                let p = sdag.matmul(&CMat::from_u32(&m, ctx), ctx).matmul(s, ctx);
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            assert!(
                                precision::cmp(&p.at(i, j).abs(ctx), &tol) == Ordering::Less
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rep_s3_has_no_s_matrix() {
        assert!(rep_s3().validate().violations.is_empty());
        let (out, _, _) = search(&rep_s3());
        assert!(out.is_empty());
    }

    #[test]
    fn rank_one_s_matrix_is_unit() {
        let ring = FusionRing::new(1, &[vec![vec![1]]], &[1]).unwrap();
        let (out, ctx, tol) = search(&ring);
        assert_eq!(out.len(), 1);
        assert!(entry_close(&out[0], 0, 0, &ctx.one(), ctx, &tol));
    }
}
