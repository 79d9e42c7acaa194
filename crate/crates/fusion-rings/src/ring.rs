//! Fusion ring storage and axiom checking.
//!
//! A fusion ring of rank `r` is stored as the full tensor of structure
//! constants `N_{ab}^c` together with the dual involution. Basis indices are
//! 1-based everywhere in the public API; index 1 is always the unit.

use crate::error::{FusionError, Result};

/// A based ring with non-negative integer structure constants.
///
/// The type itself only guarantees *shape* (an `r x r x r` tensor and a
/// bijective dual map); whether the data satisfies the fusion-ring axioms is
/// reported by [`FusionRing::validate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FusionRing {
    rank: usize,
    /// Flat tensor, `n[(a-1)*r*r + (b-1)*r + (c-1)] = N_{ab}^c`.
    n: Vec<u32>,
    /// `dual[a-1]` is the 1-based index of the dual of `a`.
    dual: Vec<usize>,
    mult: u32,
}

impl std::fmt::Debug for FusionRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FusionRing(rank={}, m={}, dual={:?})", self.rank, self.mult, self.dual)
    }
}

/// Which axiom a violation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomTag {
    Unit,
    Duality,
    Involution,
    Frobenius,
    Pivotal,
    Associativity,
}

/// A single axiom violation, pinpointing the first failing index tuple.
#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: AxiomTag,
    pub indices: Vec<usize>,
    pub detail: String,
}

/// Result of [`FusionRing::validate`]: the first violation found for each
/// axiom, in checking order. Empty means the ring is valid.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FusionRing {
    /// Build a ring from a nested tensor `n[a-1][b-1][c-1] = N_{ab}^c` and a
    /// 1-based dual map. Only shape is checked here.
    pub fn new(rank: usize, n: &[Vec<Vec<u32>>], dual: &[usize]) -> Result<Self> {
        if rank == 0 {
            return Err(FusionError::Shape("rank must be at least 1".into()));
        }
        if n.len() != rank {
            return Err(FusionError::Shape(format!(
                "tensor has {} outer slices, expected {rank}",
                n.len()
            )));
        }
        let mut flat = Vec::with_capacity(rank * rank * rank);
        for (a, slice) in n.iter().enumerate() {
            if slice.len() != rank {
                return Err(FusionError::Shape(format!(
                    "slice a={} has {} rows, expected {rank}",
                    a + 1,
                    slice.len()
                )));
            }
            for (b, row) in slice.iter().enumerate() {
                if row.len() != rank {
                    return Err(FusionError::Shape(format!(
                        "row a={},b={} has {} entries, expected {rank}",
                        a + 1,
                        b + 1,
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(rank, flat, dual.to_vec())
    }

    /// Build a ring from the flat tensor layout used internally.
    pub fn from_flat(rank: usize, n: Vec<u32>, dual: Vec<usize>) -> Result<Self> {
        if rank == 0 {
            return Err(FusionError::Shape("rank must be at least 1".into()));
        }
        if n.len() != rank * rank * rank {
            return Err(FusionError::Shape(format!(
                "flat tensor has {} entries, expected {}",
                n.len(),
                rank * rank * rank
            )));
        }
        if dual.len() != rank {
            return Err(FusionError::Shape(format!(
                "dual map has {} entries, expected {rank}",
                dual.len()
            )));
        }
        let mut seen = vec![false; rank];
        for &d in &dual {
            if d == 0 || d > rank {
                return Err(FusionError::Shape(format!("dual index {d} out of range 1..={rank}")));
            }
            if seen[d - 1] {
                return Err(FusionError::Shape(format!("dual map repeats index {d}")));
            }
            seen[d - 1] = true;
        }
        let mult = n.iter().copied().max().unwrap_or(0);
        Ok(FusionRing { rank, n, dual, mult })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Structure constant `N_{ab}^c` (all arguments 1-based).
    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[(a - 1) * self.rank * self.rank + (b - 1) * self.rank + (c - 1)]
    }

    /// Dual of basis element `a` (1-based).
    #[inline]
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a - 1]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    /// Largest structure constant.
    pub fn multiplicity(&self) -> u32 {
        self.mult
    }

    /// Number of self-dual basis elements (the unit counts).
    pub fn self_dual_count(&self) -> usize {
        (1..=self.rank).filter(|&a| self.dual(a) == a).count()
    }

    pub fn flat(&self) -> &[u32] {
        &self.n
    }

    /// True when self-dual elements occupy `1..=s` and the remaining
    /// elements form adjacent dual pairs `(s+1, s+2), (s+3, s+4), ...`.
    pub fn standard_layout(&self) -> bool {
        let s = self.self_dual_count();
        for a in 1..=s {
            if self.dual(a) != a {
                return false;
            }
        }
        let mut a = s + 1;
        while a + 1 <= self.rank {
            if self.dual(a) != a + 1 || self.dual(a + 1) != a {
                return false;
            }
            a += 2;
        }
        a == self.rank + 1
    }

    /// Check every axiom, reporting the first failing index tuple per axiom.
    pub fn validate(&self) -> ValidationReport {
        let r = self.rank;
        let mut report = ValidationReport::default();

        // Unit: N_{1b}^c = delta_{bc} and N_{a1}^c = delta_{ac}.
        'unit: for b in 1..=r {
            for c in 1..=r {
                let want = u32::from(b == c);
                for (a2, b2) in [(1, b), (b, 1)] {
                    if self.n(a2, b2, c) != want {
                        report.violations.push(Violation {
                            axiom: AxiomTag::Unit,
                            indices: vec![a2, b2, c],
                            detail: format!(
                                "N_{{{a2},{b2}}}^{c} = {}, expected {want}",
                                self.n(a2, b2, c)
                            ),
                        });
                        break 'unit;
                    }
                }
            }
        }

        // Involution: dual(1) = 1 and dual(dual(a)) = a.
        for a in 1..=r {
            let bad = if a == 1 { self.dual(1) != 1 } else { self.dual(self.dual(a)) != a };
            if bad {
                report.violations.push(Violation {
                    axiom: AxiomTag::Involution,
                    indices: vec![a],
                    detail: if a == 1 {
                        format!("dual(1) = {}, expected 1", self.dual(1))
                    } else {
                        format!("dual(dual({a})) = {}, expected {a}", self.dual(self.dual(a)))
                    },
                });
                break;
            }
        }

        // Duality: N_{ab}^1 = delta_{b, dual(a)}.
        'dual: for a in 1..=r {
            for b in 1..=r {
                let want = u32::from(b == self.dual(a));
                if self.n(a, b, 1) != want {
                    report.violations.push(Violation {
                        axiom: AxiomTag::Duality,
                        indices: vec![a, b, 1],
                        detail: format!("N_{{{a},{b}}}^1 = {}, expected {want}", self.n(a, b, 1)),
                    });
                    break 'dual;
                }
            }
        }

        // Frobenius reciprocity: N_{ab}^c = N_{dual(a) c}^b.
        'frob: for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    if self.n(a, b, c) != self.n(self.dual(a), c, b) {
                        report.violations.push(Violation {
                            axiom: AxiomTag::Frobenius,
                            indices: vec![a, b, c],
                            detail: format!(
                                "N_{{{a},{b}}}^{c} = {} but N_{{{},{c}}}^{b} = {}",
                                self.n(a, b, c),
                                self.dual(a),
                                self.n(self.dual(a), c, b)
                            ),
                        });
                        break 'frob;
                    }
                }
            }
        }

        // Pivotal closure: all six images of (a,b,c) carry the same value.
        'piv: for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    let v = self.n(a, b, c);
                    for (i, (x, y, z)) in
                        pivotal_orbit(a, b, c, &self.dual).into_iter().enumerate().skip(1)
                    {
                        if self.n(x, y, z) != v {
                            report.violations.push(Violation {
                                axiom: AxiomTag::Pivotal,
                                indices: vec![a, b, c],
                                detail: format!(
                                    "orbit image {} of ({a},{b},{c}) is N_{{{x},{y}}}^{z} = {}, expected {v}",
                                    i + 1,
                                    self.n(x, y, z)
                                ),
                            });
                            break 'piv;
                        }
                    }
                }
            }
        }

        // Associativity: sum_e N_{ab}^e N_{ec}^d = sum_f N_{bc}^f N_{af}^d.
        'assoc: for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    for d in 1..=r {
                        let lhs: u64 =
                            (1..=r).map(|e| self.n(a, b, e) as u64 * self.n(e, c, d) as u64).sum();
                        let rhs: u64 =
                            (1..=r).map(|f| self.n(b, c, f) as u64 * self.n(a, f, d) as u64).sum();
                        if lhs != rhs {
                            report.violations.push(Violation {
                                axiom: AxiomTag::Associativity,
                                indices: vec![a, b, c, d],
                                detail: format!(
                                    "(({a}*{b})*{c})|_{d} = {lhs} but ({a}*({b}*{c}))|_{d} = {rhs}"
                                ),
                            });
                            break 'assoc;
                        }
                    }
                }
            }
        }

        report
    }

    /// Fusion matrices `[N_a]` with `[N_a][c-1][b-1] = N_{ab}^c`, i.e. the
    /// matrix acting on column vectors by left multiplication by `a`.
    pub fn fusion_matrices(&self) -> Vec<Vec<Vec<u32>>> {
        let r = self.rank;
        (1..=r)
            .map(|a| (1..=r).map(|c| (1..=r).map(|b| self.n(a, b, c)).collect()).collect())
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank;
        for a in 1..=r {
            for b in a + 1..=r {
                for c in 1..=r {
                    if self.n(a, b, c) != self.n(b, a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Indices of invertible basis elements (`a * dual(a) = 1` exactly),
    /// sorted ascending. For a valid ring this set is a group under fusion.
    pub fn invertible_subgroup(&self) -> Vec<usize> {
        (1..=self.rank)
            .filter(|&a| {
                (1..=self.rank).map(|c| self.n(a, self.dual(a), c) as u64).sum::<u64>() == 1
            })
            .collect()
    }

    /// All subsets containing the unit that are closed under fusion and
    /// duality, each with its induced fusion ring. Exponential in rank.
    pub fn sub_fusion_rings(&self) -> Vec<(Vec<usize>, FusionRing)> {
        let r = self.rank;
        let mut out = Vec::new();
        for mask in 0u64..(1 << (r - 1)) {
            let subset: Vec<usize> =
                std::iter::once(1).chain((2..=r).filter(|&a| mask >> (a - 2) & 1 == 1)).collect();
            if !self.is_closed_subset(&subset) {
                continue;
            }
            let k = subset.len();
            let pos = |x: usize| subset.iter().position(|&y| y == x).unwrap() + 1;
            let mut n = vec![0u32; k * k * k];
            for (i, &a) in subset.iter().enumerate() {
                for (j, &b) in subset.iter().enumerate() {
                    for (l, &c) in subset.iter().enumerate() {
                        n[i * k * k + j * k + l] = self.n(a, b, c);
                    }
                }
            }
            let dual = subset.iter().map(|&a| pos(self.dual(a))).collect();
            out.push((subset, FusionRing::from_flat(k, n, dual).expect("induced shape")));
        }
        out
    }

    fn is_closed_subset(&self, subset: &[usize]) -> bool {
        let inside = |x: usize| subset.contains(&x);
        for &a in subset {
            if !inside(self.dual(a)) {
                return false;
            }
            for &b in subset {
                for c in 1..=self.rank {
                    if self.n(a, b, c) > 0 && !inside(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Relabel basis elements: `perm[a-1]` is the new index of old element
    /// `a`. The result satisfies `N'_{perm(a) perm(b)}^{perm(c)} = N_{ab}^c`.
    pub fn permute(&self, perm: &[usize]) -> Result<FusionRing> {
        let r = self.rank;
        if perm.len() != r {
            return Err(FusionError::Shape(format!(
                "permutation has {} entries, expected {r}",
                perm.len()
            )));
        }
        let mut seen = vec![false; r];
        for &p in perm {
            if p == 0 || p > r || seen[p - 1] {
                return Err(FusionError::Shape("not a permutation".into()));
            }
            seen[p - 1] = true;
        }
        let mut n = vec![0u32; r * r * r];
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    let (pa, pb, pc) = (perm[a - 1], perm[b - 1], perm[c - 1]);
                    n[(pa - 1) * r * r + (pb - 1) * r + (pc - 1)] = self.n(a, b, c);
                }
            }
        }
        let mut dual = vec![0usize; r];
        for a in 1..=r {
            dual[perm[a - 1] - 1] = perm[self.dual(a) - 1];
        }
        FusionRing::from_flat(r, n, dual)
    }
}

/// The six pivotal images of the triple `(a,b,c)` (the first is the triple
/// itself). Order matches the orbit maps used throughout the crate.
pub fn pivotal_orbit(a: usize, b: usize, c: usize, dual: &[usize]) -> [(usize, usize, usize); 6] {
    let d = |x: usize| dual[x - 1];
    [
        (a, b, c),
        (d(a), c, b),
        (c, d(b), a),
        (b, d(c), d(a)),
        (d(c), a, d(b)),
        (d(b), d(a), d(c)),
    ]
}

/// Direct product ring: basis pairs `(a1, a2)` mapped to index
/// `(a1-1)*r2 + a2`, with componentwise fusion and duality.
pub fn direct_product(x: &FusionRing, y: &FusionRing) -> FusionRing {
    let (r1, r2) = (x.rank(), y.rank());
    let r = r1 * r2;
    let idx = |a1: usize, a2: usize| (a1 - 1) * r2 + a2;
    let mut n = vec![0u32; r * r * r];
    for a1 in 1..=r1 {
        for b1 in 1..=r1 {
            for c1 in 1..=r1 {
                let v1 = x.n(a1, b1, c1);
                if v1 == 0 {
                    continue;
                }
                for a2 in 1..=r2 {
                    for b2 in 1..=r2 {
                        for c2 in 1..=r2 {
                            let v = v1 * y.n(a2, b2, c2);
                            if v != 0 {
                                let (a, b, c) = (idx(a1, a2), idx(b1, b2), idx(c1, c2));
                                n[(a - 1) * r * r + (b - 1) * r + (c - 1)] = v;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut dual = vec![0usize; r];
    for a1 in 1..=r1 {
        for a2 in 1..=r2 {
            dual[idx(a1, a2) - 1] = idx(x.dual(a1), y.dual(a2));
        }
    }
    FusionRing::from_flat(r, n, dual).expect("product shape")
}
