//! Variable reduction via pivotal orbits.
//!
//! For a search over rank `r`, multiplicity bound `m` and `s` self-dual
//! elements (standard layout: unit, then self-duals, then adjacent dual
//! pairs), every structure constant belongs to a pivotal orbit of at most six
//! triples. Orbits touching an index-1 triple are forced to 0/1 by the unit
//! and duality axioms; each remaining orbit contributes one search variable
//! ranging over `0..=m`.

use num_bigint::BigUint;

use crate::error::{FusionError, Result};
use crate::ring::{pivotal_orbit, FusionRing};

/// One reduced search variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableIndex {
    pub orbit_id: usize,
    /// Lexicographically smallest triple of the orbit.
    pub representative: (usize, usize, usize),
    /// Inclusive upper bound for the value (the multiplicity bound).
    pub bound: u32,
}

/// Resolution of a tensor slot after orbit reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Forced(u32),
    Var(usize),
}

/// The reduced search space for one `(r, m, s)` cell.
#[derive(Clone, Debug)]
pub struct VariableTable {
    pub rank: usize,
    pub mult: u32,
    pub self_dual: usize,
    pub dual: Vec<usize>,
    /// `slots[(a-1)*r*r + (b-1)*r + (c-1)]`.
    pub slots: Vec<Slot>,
    pub vars: Vec<VariableIndex>,
}

/// Standard-layout dual map for `(r, s)`.
pub fn standard_dual(rank: usize, self_dual: usize) -> Result<Vec<usize>> {
    if self_dual == 0 || self_dual > rank {
        return Err(FusionError::InvalidArgument(format!(
            "self-dual count {self_dual} out of range 1..={rank}"
        )));
    }
    if (rank - self_dual) % 2 != 0 {
        return Err(FusionError::InvalidArgument(format!(
            "rank {rank} minus self-dual count {self_dual} must be even"
        )));
    }
    let mut dual: Vec<usize> = (1..=rank).collect();
    let mut a = self_dual + 1;
    while a < rank {
        dual[a - 1] = a + 1;
        dual[a] = a;
        a += 2;
    }
    Ok(dual)
}

impl VariableTable {
    pub fn new(rank: usize, mult: u32, self_dual: usize) -> Result<VariableTable> {
        if mult == 0 {
            return Err(FusionError::InvalidArgument("multiplicity bound must be positive".into()));
        }
        let dual = standard_dual(rank, self_dual)?;
        let r = rank;
        let d = |x: usize| dual[x - 1];
        let flat = |a: usize, b: usize, c: usize| (a - 1) * r * r + (b - 1) * r + (c - 1);

        let mut slots = vec![None::<Slot>; r * r * r];
        let mut vars = Vec::new();
        for a in 1..=r {
            for b in 1..=r {
                for c in 1..=r {
                    if slots[flat(a, b, c)].is_some() {
                        continue;
                    }
                    let orbit = pivotal_orbit(a, b, c, &dual);
                    // Forced value from any member with an index-1 coordinate.
                    let mut forced = None;
                    for &(x, y, z) in &orbit {
                        let f = if x == 1 {
                            Some(u32::from(y == z))
                        } else if y == 1 {
                            Some(u32::from(x == z))
                        } else if z == 1 {
                            Some(u32::from(y == d(x)))
                        } else {
                            None
                        };
                        if let Some(v) = f {
                            debug_assert!(forced.is_none() || forced == Some(v));
                            forced = Some(v);
                        }
                    }
                    let slot = match forced {
                        Some(v) => Slot::Forced(v),
                        None => {
                            let id = vars.len();
                            vars.push(VariableIndex {
                                orbit_id: id,
                                representative: (a, b, c),
                                bound: mult,
                            });
                            Slot::Var(id)
                        }
                    };
                    for &(x, y, z) in &orbit {
                        let pos = flat(x, y, z);
                        debug_assert!(slots[pos].is_none() || slots[pos] == Some(slot));
                        slots[pos] = Some(slot);
                    }
                }
            }
        }
        Ok(VariableTable {
            rank,
            mult,
            self_dual,
            dual,
            slots: slots.into_iter().map(|s| s.expect("all slots resolved")).collect(),
            vars,
        })
    }

    #[inline]
    pub fn slot(&self, a: usize, b: usize, c: usize) -> Slot {
        self.slots[(a - 1) * self.rank * self.rank + (b - 1) * self.rank + (c - 1)]
    }

    /// Materialise a full ring from an assignment of the orbit variables.
    pub fn expand(&self, assignment: &[u32]) -> FusionRing {
        let n = self
            .slots
            .iter()
            .map(|s| match *s {
                Slot::Forced(v) => v,
                Slot::Var(i) => assignment[i],
            })
            .collect();
        FusionRing::from_flat(self.rank, n, self.dual.clone()).expect("table shape")
    }
}

/// The reduced variable list for one `(r, m, s)` cell.
pub fn reduced_variables(rank: usize, mult: u32, self_dual: usize) -> Result<Vec<VariableIndex>> {
    Ok(VariableTable::new(rank, mult, self_dual)?.vars)
}

/// Number of assignments of the reduced variables: `(m+1)^#vars`.
pub fn search_space_size(rank: usize, mult: u32, self_dual: usize) -> Result<BigUint> {
    let vars = reduced_variables(rank, mult, self_dual)?;
    Ok(BigUint::from(mult as u64 + 1).pow(vars.len() as u32))
}
