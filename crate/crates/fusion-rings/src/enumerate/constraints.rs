//! Constraint compilation for the backtracking search.
//!
//! Associativity becomes quadratic polynomial equations over the orbit
//! variables. Symmetry breaking adds guarded lexicographic chains and trace
//! budgets, applied separately to the self-dual block and to the dual-pair
//! block (pairs are compared through their first members; nothing constrains
//! the orientation within a pair).

use std::collections::{BTreeMap, HashSet};

use super::orbits::{Slot, VariableTable};

/// A compiled constraint over orbit-variable ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `sum quad c*v_i*v_j + sum lin c*v_i + konst == 0`.
    Poly { quad: Vec<(i64, usize, usize)>, lin: Vec<(i64, usize)>, konst: i64 },
    /// `any guard pair differs, or vals[le.0] <= vals[le.1]`.
    Guarded { guards: Vec<(usize, usize)>, le: (usize, usize) },
    /// `sum c*v_i + konst >= 0`.
    Budget { terms: Vec<(i64, usize)>, konst: i64 },
}

impl Constraint {
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self {
            Constraint::Poly { quad, lin, .. } => {
                for &(_, i, j) in quad {
                    out.push(i);
                    out.push(j);
                }
                for &(_, i) in lin {
                    out.push(i);
                }
            }
            Constraint::Guarded { guards, le } => {
                for &(i, j) in guards {
                    out.push(i);
                    out.push(j);
                }
                out.push(le.0);
                out.push(le.1);
            }
            Constraint::Budget { terms, .. } => {
                for &(_, i) in terms {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn eval(&self, vals: &[u32]) -> bool {
        match self {
            Constraint::Poly { quad, lin, konst } => {
                let mut acc = *konst;
                for &(c, i, j) in quad {
                    acc += c * vals[i] as i64 * vals[j] as i64;
                }
                for &(c, i) in lin {
                    acc += c * vals[i] as i64;
                }
                acc == 0
            }
            Constraint::Guarded { guards, le } => {
                guards.iter().any(|&(i, j)| vals[i] != vals[j]) || vals[le.0] <= vals[le.1]
            }
            Constraint::Budget { terms, konst } => {
                let mut acc = *konst;
                for &(c, i) in terms {
                    acc += c * vals[i] as i64;
                }
                acc >= 0
            }
        }
    }
}

/// Accumulates a quadratic expression over slots.
#[derive(Default)]
struct PolyAcc {
    quad: BTreeMap<(usize, usize), i64>,
    lin: BTreeMap<usize, i64>,
    konst: i64,
}

impl PolyAcc {
    fn add_product(&mut self, sign: i64, x: Slot, y: Slot) {
        match (x, y) {
            (Slot::Forced(a), Slot::Forced(b)) => self.konst += sign * a as i64 * b as i64,
            (Slot::Forced(a), Slot::Var(v)) | (Slot::Var(v), Slot::Forced(a)) => {
                if a != 0 {
                    *self.lin.entry(v).or_insert(0) += sign * a as i64;
                }
            }
            (Slot::Var(v), Slot::Var(w)) => {
                let key = (v.min(w), v.max(w));
                *self.quad.entry(key).or_insert(0) += sign;
            }
        }
    }

    fn finish(self) -> Option<Constraint> {
        let quad: Vec<(i64, usize, usize)> =
            self.quad.into_iter().filter(|&(_, c)| c != 0).map(|((i, j), c)| (c, i, j)).collect();
        let lin: Vec<(i64, usize)> =
            self.lin.into_iter().filter(|&(_, c)| c != 0).map(|(i, c)| (c, i)).collect();
        if quad.is_empty() && lin.is_empty() {
            // Degenerate constant constraint: must hold identically.
            assert_eq!(self.konst, 0, "inconsistent forced associativity");
            return None;
        }
        Some(Constraint::Poly { quad, lin, konst: self.konst })
    }
}

/// Compile associativity `(a*b)*c = a*(b*c)` for all `a,b,c,d >= 2` (tuples
/// touching the unit reduce to pivotal identities, which orbit reduction has
/// already enforced). Trivial and duplicate equations are dropped.
pub fn associativity_constraints(table: &VariableTable) -> Vec<Constraint> {
    let r = table.rank;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                for d in 2..=r {
                    let mut acc = PolyAcc::default();
                    for e in 1..=r {
                        acc.add_product(1, table.slot(a, b, e), table.slot(e, c, d));
                    }
                    for f in 1..=r {
                        acc.add_product(-1, table.slot(b, c, f), table.slot(a, f, d));
                    }
                    if let Some(cst) = acc.finish() {
                        if seen.insert(cst.clone()) {
                            out.push(cst);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Compile the symmetry-breaking constraints for the standard layout.
pub fn symmetry_constraints(table: &VariableTable) -> Vec<Constraint> {
    let r = table.rank;
    let s = table.self_dual;
    let mut out = Vec::new();

    // iota_a(i) = N_{ai}^i; for a, i >= 2 this is always an orbit variable.
    let iota = |a: usize, i: usize| match table.slot(a, i, i) {
        Slot::Var(v) => v,
        Slot::Forced(_) => unreachable!("iota slots with both indices >= 2 are variables"),
    };
    // Full trace sum_{i=1}^r N_{ai}^i as budget terms.
    let trace = |a: usize, sign: i64, acc: &mut BTreeMap<usize, i64>, konst: &mut i64| {
        for i in 1..=r {
            match table.slot(a, i, i) {
                Slot::Forced(v) => *konst += sign * v as i64,
                Slot::Var(v) => *acc.entry(v).or_insert(0) += sign,
            }
        }
    };
    let budget = |hi: usize, lo: usize| {
        let mut acc = BTreeMap::new();
        let mut konst = 0i64;
        trace(hi, 1, &mut acc, &mut konst);
        trace(lo, -1, &mut acc, &mut konst);
        let terms: Vec<(i64, usize)> =
            acc.into_iter().filter(|&(_, c)| c != 0).map(|(i, c)| (c, i)).collect();
        Constraint::Budget { terms, konst }
    };

    // Self-dual block: positions 2..=s.
    for i in 2..=s {
        for j in i + 1..s {
            let guards: Vec<(usize, usize)> = (2..i).map(|n| (iota(n, j), iota(n, j + 1))).collect();
            out.push(Constraint::Guarded { guards, le: (iota(i, j), iota(i, j + 1)) });
        }
    }
    for k in 3..=s {
        out.push(budget(2, k));
    }

    // Dual-pair block: pairs q = 1..=p with first members s + 2q - 1.
    let p = (r - s) / 2;
    let first = |q: usize| s + 2 * q - 1;
    for qi in 1..=p {
        for qj in qi + 1..p {
            let guards: Vec<(usize, usize)> =
                (1..qi).map(|n| (iota(first(n), first(qj)), iota(first(n), first(qj + 1)))).collect();
            out.push(Constraint::Guarded {
                guards,
                le: (iota(first(qi), first(qj)), iota(first(qi), first(qj + 1))),
            });
        }
    }
    for k in 2..=p {
        out.push(budget(first(1), first(k)));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::orbits::VariableTable;
    use crate::ring::FusionRing;

    fn assignment_for(table: &VariableTable, ring: &FusionRing) -> Vec<u32> {
        table
            .vars
            .iter()
            .map(|v| {
                let (a, b, c) = v.representative;
                ring.n(a, b, c)
            })
            .collect()
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

    #[test]
    fn valid_ring_satisfies_associativity() {
        let table = VariableTable::new(3, 1, 3).unwrap();
        let constraints = associativity_constraints(&table);
        assert!(!constraints.is_empty());
        let vals = assignment_for(&table, &ising());
        for c in &constraints {
            assert!(c.eval(&vals), "{c:?} failed on Ising");
        }
        // Round trip: the assignment expands back to the same ring.
        assert_eq!(table.expand(&vals), ising());
    }

    #[test]
    fn symmetry_orders_ising_labels() {
        let table = VariableTable::new(3, 1, 3).unwrap();
        let sym = symmetry_constraints(&table);
        // One budget constraint (k = 3), no chains at s = 3.
        assert_eq!(sym.len(), 1);
        let good = assignment_for(&table, &ising());
        assert!(sym.iter().all(|c| c.eval(&good)));
        // Swapping g and t (labels 2 and 3) violates the trace budget.
        let swapped = ising().permute(&[1, 3, 2]).unwrap();
        let bad = assignment_for(&table, &swapped);
        assert!(!sym.iter().all(|c| c.eval(&bad)));
    }

    #[test]
    fn pair_block_budgets() {
        // r = 5, s = 1: two dual pairs, single budget comparing them.
        let table = VariableTable::new(5, 1, 1).unwrap();
        let sym = symmetry_constraints(&table);
        assert_eq!(
            sym.iter().filter(|c| matches!(c, Constraint::Budget { .. })).count(),
            1
        );
        // r = 7, s = 1: three pairs -> one chain level plus two budgets.
        let table = VariableTable::new(7, 1, 1).unwrap();
        let sym = symmetry_constraints(&table);
        assert_eq!(
            sym.iter().filter(|c| matches!(c, Constraint::Guarded { .. })).count(),
            1
        );
        assert_eq!(
            sym.iter().filter(|c| matches!(c, Constraint::Budget { .. })).count(),
            2
        );
    }

    #[test]
    fn constraint_eval_semantics() {
        let c = Constraint::Poly { quad: vec![(1, 0, 0)], lin: vec![(-1, 1)], konst: 0 };
        assert!(c.eval(&[2, 4]));
        assert!(!c.eval(&[2, 3]));
        let g = Constraint::Guarded { guards: vec![(0, 1)], le: (2, 3) };
        assert!(g.eval(&[1, 0, 9, 0]), "differing guard disables the inequality");
        assert!(!g.eval(&[1, 1, 9, 0]));
        let b = Constraint::Budget { terms: vec![(1, 0), (-2, 1)], konst: 1 };
        assert!(b.eval(&[1, 1]));
        assert!(!b.eval(&[0, 1]));
    }
}
