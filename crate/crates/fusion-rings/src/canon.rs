//! Canonical forms, equivalence testing, and ring naming.
//!
//! The canonical code of a ring is the lexicographically largest flattening
//! `N_{1,1}^1, N_{1,1}^2, ..., N_{r,r}^r` (digits in base `m+1`) over all
//! *admissible* relabelings: the unit stays at 1, non-unit self-dual elements
//! come next in ascending FP-dimension order, then dual pairs as adjacent
//! slots ordered by their FP dimension. Elements whose dimensions agree
//! within `1e-30` are tie-broken by trying every arrangement, and both
//! orientations of every dual pair are tried.

use std::cmp::Ordering;

use crate::dims::fp_dimensions;
use crate::error::Result;
use crate::precision::{self, Ctx};
use crate::ring::FusionRing;

/// Internal precision for the dimension ordering. Fixed (rather than caller
/// supplied) so canonical codes never depend on run configuration.
const CANON_DIGITS: usize = 60;
/// Two dimensions closer than this are treated as tied.
const TIE_GAP_EXP: i64 = -30;

/// Canonical invariant of a fusion ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalCode {
    pub rank: usize,
    /// Actual largest structure constant (not an enumeration bound).
    pub mult: u32,
    /// Number of self-dual elements including the unit.
    pub self_dual: usize,
    /// The `r^3` digits of the maximal flattening.
    pub digits: Vec<u32>,
}

impl CanonicalCode {
    /// Non-self-dual element count (the `n` of the ring's name).
    pub fn non_self_dual(&self) -> usize {
        self.rank - self.self_dual
    }

    pub fn nonzero_digits(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    /// Digit string in base `mult+1`; dash-separated when digits can exceed 9.
    pub fn digit_string(&self) -> String {
        if self.mult <= 9 {
            self.digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
        } else {
            self.digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("-")
        }
    }

    /// Catalog sort key: multiplicity, rank, non-self-dual count, number of
    /// nonzero constants, then the code digits.
    fn sort_key(&self) -> (u32, usize, usize, usize, &[u32]) {
        (self.mult, self.rank, self.non_self_dual(), self.nonzero_digits(), &self.digits)
    }
}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Result of canonicalisation: the code, one relabeling that achieves it,
/// and the relabeled ring.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub code: CanonicalCode,
    /// `perm[a-1]` is the canonical label of input element `a`.
    pub perm: Vec<usize>,
    pub ring: FusionRing,
}

/// Compute the canonical form of a valid fusion ring.
pub fn canonical_form(ring: &FusionRing) -> Result<Canonical> {
    let r = ring.rank();
    let ctx = Ctx::from_digits(CANON_DIGITS);
    let tol = ctx.ten_pow(-30);
    let fp = fp_dimensions(ring, ctx, &tol)?;
    let gap = ctx.ten_pow(TIE_GAP_EXP);

    // Split non-unit elements into self-duals and pair representatives,
    // sort by dimension, and cluster ties.
    let mut selfduals: Vec<usize> = (2..=r).filter(|&a| ring.dual(a) == a).collect();
    let mut pairs: Vec<usize> = (2..=r).filter(|&a| ring.dual(a) > a).collect();
    let by_dim = |x: &usize, y: &usize| precision::cmp(&fp.dims[*x - 1], &fp.dims[*y - 1]);
    selfduals.sort_by(by_dim);
    pairs.sort_by(by_dim);
    let sd_groups = cluster(&selfduals, &fp.dims, &gap, ctx);
    let pair_groups = cluster(&pairs, &fp.dims, &gap, ctx);

    let s = selfduals.len() + 1;
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut perm = vec![0usize; r];
    perm[0] = 1;

    // Depth-first product over tie groups; `next_sd` / `next_pair` are the
    // next canonical positions to fill in each block.
    fn descend(
        ring: &FusionRing,
        sd_groups: &[Vec<usize>],
        pair_groups: &[Vec<usize>],
        gi: usize,
        next_sd: usize,
        next_pair: usize,
        s: usize,
        perm: &mut Vec<usize>,
        best: &mut Option<(Vec<u32>, Vec<usize>)>,
    ) {
        if gi < sd_groups.len() {
            let group = &sd_groups[gi];
            for_each_permutation(group.len(), &mut |order| {
                for (k, &pick) in order.iter().enumerate() {
                    perm[group[pick] - 1] = next_sd + k;
                }
                descend(
                    ring,
                    sd_groups,
                    pair_groups,
                    gi + 1,
                    next_sd + group.len(),
                    next_pair,
                    s,
                    perm,
                    best,
                );
            });
            return;
        }
        let pi = gi - sd_groups.len();
        if pi < pair_groups.len() {
            let group = &pair_groups[pi];
            for_each_permutation(group.len(), &mut |order| {
                for flips in 0u32..(1 << group.len()) {
                    for (k, &pick) in order.iter().enumerate() {
                        let x = group[pick];
                        let (lo, hi) = (next_pair + 2 * k, next_pair + 2 * k + 1);
                        if flips >> k & 1 == 0 {
                            perm[x - 1] = lo;
                            perm[ring.dual(x) - 1] = hi;
                        } else {
                            perm[x - 1] = hi;
                            perm[ring.dual(x) - 1] = lo;
                        }
                    }
                    descend(
                        ring,
                        sd_groups,
                        pair_groups,
                        gi + 1,
                        next_sd,
                        next_pair + 2 * group.len(),
                        s,
                        perm,
                        best,
                    );
                }
            });
            return;
        }
        consider(ring, perm, best);
    }

    descend(ring, &sd_groups, &pair_groups, 0, 2, s + 1, s, &mut perm, &mut best);
    let (digits, perm) = best.expect("at least one admissible relabeling");
    let canonical_ring = ring.permute(&perm)?;
    Ok(Canonical {
        code: CanonicalCode {
            rank: r,
            mult: ring.multiplicity(),
            self_dual: s,
            digits,
        },
        perm,
        ring: canonical_ring,
    })
}

/// Convenience wrapper returning only the code.
pub fn canonical_code(ring: &FusionRing) -> Result<CanonicalCode> {
    canonical_form(ring).map(|c| c.code)
}

/// Compare candidate relabeling against the best so far, replacing it when
/// the flattening is lexicographically larger. Early-exits on first losing
/// digit.
fn consider(ring: &FusionRing, perm: &[usize], best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    let r = ring.rank();
    let mut inv = vec![0usize; r];
    for (old, &new) in perm.iter().enumerate() {
        inv[new - 1] = old + 1;
    }
    match best {
        None => {
            let mut digits = Vec::with_capacity(r * r * r);
            for a in 1..=r {
                for b in 1..=r {
                    for c in 1..=r {
                        digits.push(ring.n(inv[a - 1], inv[b - 1], inv[c - 1]));
                    }
                }
            }
            *best = Some((digits, perm.to_vec()));
        }
        Some((bd, bp)) => {
            let mut pos = 0usize;
            for a in 1..=r {
                for b in 1..=r {
                    for c in 1..=r {
                        let d = ring.n(inv[a - 1], inv[b - 1], inv[c - 1]);
                        match d.cmp(&bd[pos]) {
                            Ordering::Less => return,
                            Ordering::Greater => {
                                // New winner: rewrite tail from here.
                                bd[pos] = d;
                                let mut p = pos + 1;
                                for a2 in 1..=r {
                                    for b2 in 1..=r {
                                        for c2 in 1..=r {
                                            let flat = (a2 - 1) * r * r + (b2 - 1) * r + (c2 - 1);
                                            if flat < pos + 1 {
                                                continue;
                                            }
                                            bd[p] = ring.n(inv[a2 - 1], inv[b2 - 1], inv[c2 - 1]);
                                            p += 1;
                                        }
                                    }
                                }
                                *bp = perm.to_vec();
                                return;
                            }
                            Ordering::Equal => {}
                        }
                        pos += 1;
                    }
                }
            }
        }
    }
}

/// Group consecutive elements whose dimensions differ by less than the gap.
fn cluster(sorted: &[usize], dims: &[astro_float::BigFloat], gap: &astro_float::BigFloat, ctx: Ctx) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &a in sorted {
        if let Some(last) = groups.last_mut() {
            let prev = *last.last().unwrap();
            let diff = ctx.sub(&dims[a - 1], &dims[prev - 1]);
            if precision::cmp(&diff.abs(), gap) == Ordering::Less {
                last.push(a);
                continue;
            }
        }
        groups.push(vec![a]);
    }
    groups
}

/// Visit every permutation of `0..n` (as index orders).
fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..n).collect();
    heap_recurse(&mut idx, n, f);
}

fn heap_recurse(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(idx);
        return;
    }
    for i in 0..k {
        heap_recurse(idx, k - 1, f);
        if k % 2 == 0 {
            idx.swap(i, k - 1);
        } else {
            idx.swap(0, k - 1);
        }
    }
}

/// Equivalence test. Returns a relabeling `perm` with
/// `b == a.permute(perm)` when the rings are isomorphic.
pub fn equivalent(a: &FusionRing, b: &FusionRing) -> Result<Option<Vec<usize>>> {
    if a.rank() != b.rank() || a.multiplicity() != b.multiplicity() {
        return Ok(None);
    }
    let ca = canonical_form(a)?;
    let cb = canonical_form(b)?;
    if ca.code != cb.code {
        return Ok(None);
    }
    // b = C.permute(inv(perm_b)) and C = a.permute(perm_a).
    let r = a.rank();
    let mut inv_b = vec![0usize; r];
    for (old, &new) in cb.perm.iter().enumerate() {
        inv_b[new - 1] = old + 1;
    }
    let composed: Vec<usize> = (1..=r).map(|x| inv_b[ca.perm[x - 1] - 1]).collect();
    if a.permute(&composed)? == *b {
        Ok(Some(composed))
    } else {
        Ok(None)
    }
}

/// Format the name of the `index`-th ring (1-based) in its class.
pub fn format_name(code: &CanonicalCode, index: usize) -> String {
    let (r, m, n) = (code.rank, code.mult, code.non_self_dual());
    if m <= 1 {
        format!("FR^{{{r},{n}}}_{{{index}}}")
    } else {
        format!("FR^{{{r},{m},{n}}}_{{{index}}}")
    }
}

/// Assign names to a collection of codes. Indices count rings in the same
/// `(rank, multiplicity, non-self-dual)` class in ascending code order, so
/// the collection must contain that whole class for names to be meaningful.
pub fn catalog_names(codes: &[CanonicalCode]) -> Vec<String> {
    let mut order: Vec<usize> = (0..codes.len()).collect();
    order.sort_by(|&i, &j| codes[i].cmp(&codes[j]));
    let mut names = vec![String::new(); codes.len()];
    let mut class: Option<(u32, usize, usize)> = None;
    let mut index = 0usize;
    for &i in &order {
        let key = (codes[i].mult, codes[i].rank, codes[i].non_self_dual());
        if class == Some(key) {
            index += 1;
        } else {
            class = Some(key);
            index = 1;
        }
        names[i] = format_name(&codes[i], index);
    }
    names
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

    #[test]
    fn rank_two_codes() {
        let cf = canonical_form(&fib()).unwrap();
        assert_eq!(cf.code.digit_string(), "10010111");
        assert_eq!(cf.perm, vec![1, 2]);
        let cz = canonical_form(&z2()).unwrap();
        assert_eq!(cz.code.digit_string(), "10010110");
        assert!(cz.code < cf.code);
    }

    #[test]
    fn invariance_under_relabeling() {
        let base = ising();
        let moved = base.permute(&[1, 3, 2]).unwrap();
        let a = canonical_form(&base).unwrap();
        let b = canonical_form(&moved).unwrap();
        assert_eq!(a.code, b.code);
        assert_eq!(a.ring, b.ring);
        // The sigma element has larger dimension, so it lands at position 3.
        assert_eq!(a.perm, vec![1, 2, 3]);
    }

    #[test]
    fn pair_orientation_explored() {
        let base = z3();
        let flipped = base.permute(&[1, 3, 2]).unwrap();
        assert_eq!(
            canonical_form(&base).unwrap().code,
            canonical_form(&flipped).unwrap().code
        );
    }

    #[test]
    fn equivalence_certificates() {
        let base = ising();
        let moved = base.permute(&[1, 3, 2]).unwrap();
        let perm = equivalent(&base, &moved).unwrap().expect("isomorphic");
        assert_eq!(base.permute(&perm).unwrap(), moved);
        assert!(equivalent(&fib(), &z2()).unwrap().is_none());
    }

    #[test]
    fn naming() {
        let codes = vec![
            canonical_code(&z2()).unwrap(),
            canonical_code(&fib()).unwrap(),
            canonical_code(&z3()).unwrap(),
        ];
        let names = catalog_names(&codes);
        assert_eq!(names[0], "FR^{2,0}_{1}");
        assert_eq!(names[1], "FR^{2,0}_{2}");
        assert_eq!(names[2], "FR^{3,2}_{1}");
    }
}
