//! Categorifiability obstructions: the zero-spectrum criterion and the
//! commutative Schur product criterion.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::precision::{self, Cpx, Ctx};
use crate::ring::FusionRing;
use crate::spectra::character::CharacterTable;
use crate::{FusionError, Result};

/// Margin below zero before a Schur sum counts as negative, guarding
/// against roundoff producing false obstructions.
pub const CSPC_MARGIN_EXP: i64 = -20;

/// A categorifiability obstruction together with the data needed to replay
/// it.
#[derive(Clone, Debug)]
pub enum ObstructionWitness {
    /// Indices `i_1..i_9` passing every clause of the zero-spectrum
    /// criterion; `zero_sum` is the (necessarily zero) value of the
    /// triple-product sum.
    Zsc { indices: [usize; 9], zero_sum: u64 },
    /// Unordered character-row triple whose Schur sum is negative.
    Cspc { rows: [usize; 3], sum: Cpx },
}

/// Scans for a zero-spectrum witness; `None` means the criterion cannot
/// obstruct this ring. The first witness in lexicographic index order is
/// returned, independently of thread count.
pub fn zero_spectrum(ring: &FusionRing) -> Option<ObstructionWitness> {
    let r = ring.rank();
    (1..=r)
        .into_par_iter()
        .filter_map(|i1| scan_tail(ring, i1))
        .min()
        .map(|indices| ObstructionWitness::Zsc { indices, zero_sum: 0 })
}

/// Lexicographically first witness with the given `i1`, if any.
fn scan_tail(ring: &FusionRing, i1: usize) -> Option<[usize; 9]> {
    let r = ring.rank();
    let d = |a: usize| ring.dual(a);
    for i2 in 1..=r {
        for i3 in 1..=r {
            if ring.n(i2, i1, i3) != 1 {
                continue;
            }
            for i4 in 1..=r {
                for i5 in 1..=r {
                    if ring.n(i5, i4, i2) == 0 {
                        continue;
                    }
                    for i6 in 1..=r {
                        if ring.n(i4, i1, i6) == 0 || ring.n(i5, i6, i3) == 0 {
                            continue;
                        }
                        let dis1 = pair_sum(ring, i5, i4, i3, d(i1)) == 1
                            || pair_sum(ring, i2, d(i4), i3, d(i6)) == 1
                            || pair_sum(ring, d(i5), i2, i6, d(i1)) == 1;
                        if !dis1 {
                            continue;
                        }
                        for i7 in 1..=r {
                            for i8 in 1..=r {
                                if ring.n(i2, i7, i8) == 0 {
                                    continue;
                                }
                                for i9 in 1..=r {
                                    if ring.n(i7, i9, i1) == 0 || ring.n(i8, i9, i3) == 0 {
                                        continue;
                                    }
                                    let zero: u64 = (1..=r)
                                        .map(|k| {
                                            ring.n(i4, i7, k) as u64
                                                * ring.n(d(i5), i8, k) as u64
                                                * ring.n(i6, d(i9), k) as u64
                                        })
                                        .sum();
                                    if zero != 0 {
                                        continue;
                                    }
                                    let dis2 = pair_sum(ring, i2, i7, i3, d(i9)) == 1
                                        || pair_sum(ring, i8, d(i7), i3, d(i1)) == 1
                                        || pair_sum(ring, d(i2), i8, i1, d(i9)) == 1;
                                    if dis2 {
                                        return Some([i1, i2, i3, i4, i5, i6, i7, i8, i9]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// `sum_k N_{ab}^k N_{cd}^k`.
fn pair_sum(ring: &FusionRing, a: usize, b: usize, c: usize, e: usize) -> u64 {
    (1..=ring.rank()).map(|k| ring.n(a, b, k) as u64 * ring.n(c, e, k) as u64).sum()
}

/// Exact integer replay of the zero-spectrum clauses at a witness.
pub fn replay_zsc(ring: &FusionRing, w: &ObstructionWitness) -> bool {
    let ObstructionWitness::Zsc { indices: [i1, i2, i3, i4, i5, i6, i7, i8, i9], zero_sum } = *w
    else {
        return false;
    };
    let d = |a: usize| ring.dual(a);
    let nonzero = ring.n(i4, i1, i6) != 0
        && ring.n(i5, i4, i2) != 0
        && ring.n(i5, i6, i3) != 0
        && ring.n(i7, i9, i1) != 0
        && ring.n(i2, i7, i8) != 0
        && ring.n(i8, i9, i3) != 0;
    let zero: u64 = (1..=ring.rank())
        .map(|k| {
            ring.n(i4, i7, k) as u64 * ring.n(d(i5), i8, k) as u64 * ring.n(i6, d(i9), k) as u64
        })
        .sum();
    let dis1 = pair_sum(ring, i5, i4, i3, d(i1)) == 1
        || pair_sum(ring, i2, d(i4), i3, d(i6)) == 1
        || pair_sum(ring, d(i5), i2, i6, d(i1)) == 1;
    let dis2 = pair_sum(ring, i2, i7, i3, d(i9)) == 1
        || pair_sum(ring, i8, d(i7), i3, d(i1)) == 1
        || pair_sum(ring, d(i2), i8, i1, d(i9)) == 1;
    nonzero && ring.n(i2, i1, i3) == 1 && zero == zero_sum && zero == 0 && dis1 && dis2
}

/// Scans unordered character-row triples for a negative Schur sum.
///
/// The denominator is the Frobenius-Perron value at the summation column.
/// Sums are real for commutative rings; a materially non-real sum means the
/// character table is broken and is reported as an error.
pub fn schur_product(
    ring: &FusionRing,
    table: &CharacterTable,
) -> Result<Option<ObstructionWitness>> {
    if !ring.is_commutative() {
        return Err(FusionError::NonCommutative);
    }
    let ctx = Ctx::from_digits(table.precision);
    let margin = ctx.ten_pow(CSPC_MARGIN_EXP);
    let r = ring.rank();
    for j1 in 0..r {
        for j2 in j1..r {
            for j3 in j2..r {
                let sum = schur_sum(table, [j1, j2, j3], ctx)?;
                if precision::cmp(&sum.re, &margin.neg()) == Ordering::Less {
                    return Ok(Some(ObstructionWitness::Cspc { rows: [j1, j2, j3], sum }));
                }
            }
        }
    }
    Ok(None)
}

/// Slow reference: all ordered triples, no symmetry reduction.
pub fn schur_product_ordered(
    ring: &FusionRing,
    table: &CharacterTable,
) -> Result<Option<ObstructionWitness>> {
    if !ring.is_commutative() {
        return Err(FusionError::NonCommutative);
    }
    let ctx = Ctx::from_digits(table.precision);
    let margin = ctx.ten_pow(CSPC_MARGIN_EXP);
    let r = ring.rank();
    for j1 in 0..r {
        for j2 in 0..r {
            for j3 in 0..r {
                let sum = schur_sum(table, [j1, j2, j3], ctx)?;
                if precision::cmp(&sum.re, &margin.neg()) == Ordering::Less {
                    return Ok(Some(ObstructionWitness::Cspc { rows: [j1, j2, j3], sum }));
                }
            }
        }
    }
    Ok(None)
}

/// `sum_i chi_j1(i) chi_j2(i) chi_j3(i) / d_i` at table precision.
pub fn schur_sum(table: &CharacterTable, rows: [usize; 3], ctx: Ctx) -> Result<Cpx> {
    let mut acc = Cpx::zero(ctx);
    for i in 0..table.rank {
        let num = table.chars[rows[0]][i]
            .mul(&table.chars[rows[1]][i], ctx)
            .mul(&table.chars[rows[2]][i], ctx);
        acc = acc.add(&num.div(&table.chars[0][i], ctx), ctx);
    }
    let noise = ctx.ten_pow(-30);
    if precision::cmp(&acc.im.abs(), &noise) == Ordering::Greater {
        return Err(FusionError::SearchFailed(format!(
            "Schur sum at rows {rows:?} is not real at working precision"
        )));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_rings, EnumOptions};
    use crate::spectra::character::character_table;

    fn fib() -> FusionRing {
        FusionRing::new(2, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]], &[1, 2])
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

    /// Rank-3 multiplicity-2 commutative ring with a negative Schur sum.
    fn obstructed3() -> FusionRing {
        FusionRing::from_flat(
            3,
            vec![
                1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 2, 0, 2, 1, 0, 0, 1, 0, 2, 1, 1, 1, 2,
            ],
            vec![1, 2, 3],
        )
        .unwrap()
    }

    /// Unpruned scan trying every index tuple against the replayed clauses.
    fn reference_scan(ring: &FusionRing) -> Option<[usize; 9]> {
        let r = ring.rank();
        let mut idx = [1usize; 9];
        loop {
            if replay_zsc(ring, &ObstructionWitness::Zsc { indices: idx, zero_sum: 0 }) {
                return Some(idx);
            }
            let mut pos = 9;
            while pos > 0 {
                pos -= 1;
                if idx[pos] < r {
                    idx[pos] += 1;
                    break;
                }
                idx[pos] = 1;
                if pos == 0 {
                    return None;
                }
            }
        }
    }

    #[test]
    fn group_rings_and_fibonacci_are_clear() {
        for ring in [fib(), z3()] {
            assert!(zero_spectrum(&ring).is_none());
            let table = character_table(&ring, 60, 5).unwrap();
            assert!(schur_product(&ring, &table).unwrap().is_none());
        }
    }

    #[test]
    fn rank_five_census_matches_reference() {
        let res = enumerate_rings(5, 1, &EnumOptions::default()).unwrap();
        let mut hits = 0;
        for er in &res.rings {
            let fast = zero_spectrum(&er.ring);
            let slow = reference_scan(&er.ring);
            match (&fast, slow) {
                (Some(ObstructionWitness::Zsc { indices, .. }), Some(want)) => {
                    assert_eq!(*indices, want);
                    hits += 1;
                }
                (None, None) => {}
                other => panic!("fast/slow disagree: {other:?}"),
            }
        }
        assert_eq!(hits, 2);
    }

    #[test]
    fn rank_four_scan_matches_reference() {
        let res = enumerate_rings(4, 2, &EnumOptions::default()).unwrap();
        for er in &res.rings {
            let fast = match zero_spectrum(&er.ring) {
                Some(ObstructionWitness::Zsc { indices, .. }) => Some(indices),
                _ => None,
            };
            assert_eq!(fast, reference_scan(&er.ring));
        }
    }

    #[test]
    fn zsc_witness_replays_and_tampering_fails() {
        let res = enumerate_rings(5, 1, &EnumOptions::default()).unwrap();
        let witness = res
            .rings
            .iter()
            .find_map(|er| zero_spectrum(&er.ring).map(|w| (er.ring.clone(), w)))
            .expect("an obstructed rank-5 ring");
        let (ring, w) = witness;
        assert!(replay_zsc(&ring, &w));
        let ObstructionWitness::Zsc { mut indices, zero_sum } = w else { unreachable!() };
        indices[0] = indices[0] % ring.rank() + 1;
        assert!(!replay_zsc(&ring, &ObstructionWitness::Zsc { indices, zero_sum }));
    }

    #[test]
    fn cspc_flags_the_rank_three_ring() {
        let ring = obstructed3();
        let table = character_table(&ring, 60, 11).unwrap();
        let Some(ObstructionWitness::Cspc { rows, sum }) = schur_product(&ring, &table).unwrap()
        else {
            panic!("expected a witness");
        };
        assert_eq!(rows, [1, 1, 1]);
        let ctx = Ctx::from_digits(60);
        assert_eq!(precision::cmp(&sum.re, &ctx.ten_pow(-20).neg()), Ordering::Less);
        assert!(precision::cmp(&sum.im.abs(), &ctx.ten_pow(-40)) == Ordering::Less);
    }

    #[test]
    fn cspc_ordered_reference_agrees() {
        for ring in [obstructed3(), z3(), fib()] {
            let table = character_table(&ring, 60, 3).unwrap();
            let fast = schur_product(&ring, &table).unwrap();
            let slow = schur_product_ordered(&ring, &table).unwrap();
            match (fast, slow) {
                (
                    Some(ObstructionWitness::Cspc { rows: a, .. }),
                    Some(ObstructionWitness::Cspc { rows: b, .. }),
                ) => assert_eq!(a, b),
                (None, None) => {}
                other => panic!("ordered/unordered disagree: {other:?}"),
            }
        }
    }

    #[test]
    fn cspc_verdict_is_seed_independent() {
        let ring = obstructed3();
        let ctx = Ctx::from_digits(60);
        let mut sums = Vec::new();
        for seed in [1u64, 99991] {
            let table = character_table(&ring, 60, seed).unwrap();
            let Some(ObstructionWitness::Cspc { rows, sum }) =
                schur_product(&ring, &table).unwrap()
            else {
                panic!("expected a witness");
            };
            assert_eq!(rows, [1, 1, 1]);
            sums.push(sum);
        }
        let gap = sums[0].sub(&sums[1], ctx).abs(ctx);
        assert!(precision::cmp(&gap, &ctx.ten_pow(-40)) == Ordering::Less);
    }

    #[test]
    fn noncommutative_is_domain_error() {
        let ring = FusionRing::from_flat(2, vec![1, 0, 0, 1, 0, 0, 1, 0], vec![1, 2]).unwrap();
        let table = character_table(&fib(), 60, 1).unwrap();
        assert!(matches!(schur_product(&ring, &table), Err(FusionError::NonCommutative)));
    }

    #[test]
    fn complex_sum_is_reported() {
        let ctx = Ctx::from_digits(60);
        let table = CharacterTable {
            rank: 1,
            precision: 60,
            chars: vec![vec![Cpx::from_f64s(1.0, 1.0, ctx)]],
            residual: ctx.zero(),
            draws: 0,
        };
        assert!(schur_sum(&table, [0, 0, 0], ctx).is_err());
    }
}
