//! Exhaustive enumeration of fusion rings.
//!
//! A search cell is a `(rank, multiplicity bound, self-dual count)` triple;
//! enumerating a `(rank, bound)` pair runs every admissible cell in
//! descending self-dual order. Raw engine solutions are canonicalised,
//! deduplicated, sorted by canonical code, and (for complete runs) named.

pub mod constraints;
pub mod engine;
pub mod orbits;
pub mod plan;

use std::collections::BTreeMap;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use num_bigint::BigUint;

pub use constraints::{associativity_constraints, symmetry_constraints, Constraint};
pub use engine::{backtrack, Checkpoint, EngineOptions, EngineRun, Outcome, SearchStats};
pub use orbits::{
    reduced_variables, search_space_size, standard_dual, Slot, VariableIndex, VariableTable,
};
pub use plan::{plan_search, Plan, Stage};

use crate::canon::{canonical_form, catalog_names, CanonicalCode};
use crate::error::{FusionError, Result};
use crate::ring::FusionRing;

#[derive(Clone, Default)]
pub struct EnumOptions {
    /// Restrict to one self-dual count.
    pub self_dual: Option<usize>,
    /// Worker threads; values above 1 partition the outermost loop.
    pub threads: usize,
    /// Total node budget across cells.
    pub max_nodes: Option<u64>,
    /// Continue a previous run (single-threaded only).
    pub resume: Option<Checkpoint>,
    /// Cooperative interruption flag.
    pub interrupt: Option<Arc<AtomicBool>>,
}

#[derive(Clone, Debug)]
pub struct CellReport {
    pub self_dual: usize,
    pub search_space: BigUint,
    pub stats: SearchStats,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct EnumeratedRing {
    /// Canonical representative.
    pub ring: FusionRing,
    pub code: CanonicalCode,
    /// Assigned when the run completed (classes are then whole).
    pub name: Option<String>,
    /// True when the ring's multiplicity is strictly below the search bound.
    pub below_bound: bool,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub rank: usize,
    pub mult_bound: u32,
    pub cells: Vec<CellReport>,
    /// Deduplicated rings in canonical-code order.
    pub rings: Vec<EnumeratedRing>,
    pub outcome: Outcome,
    pub checkpoint: Option<Checkpoint>,
}

/// Admissible self-dual counts for a rank, in processing order.
pub fn self_dual_counts(rank: usize) -> Vec<usize> {
    (1..=rank).rev().filter(|s| (rank - s) % 2 == 0).collect()
}

pub fn enumerate_rings(rank: usize, mult_bound: u32, opts: &EnumOptions) -> Result<Enumeration> {
    if rank == 0 {
        return Err(FusionError::InvalidArgument("rank must be at least 1".into()));
    }
    if mult_bound == 0 {
        return Err(FusionError::InvalidArgument("multiplicity bound must be positive".into()));
    }
    let threads = opts.threads.max(1);
    if opts.resume.is_some() && threads > 1 {
        return Err(FusionError::InvalidArgument(
            "resume requires a single-threaded run".into(),
        ));
    }
    let mut s_values = self_dual_counts(rank);
    if let Some(s) = opts.self_dual {
        if !s_values.contains(&s) {
            return Err(FusionError::InvalidArgument(format!(
                "self-dual count {s} is not admissible for rank {rank}"
            )));
        }
        s_values = vec![s];
    }
    let mut resume = opts.resume.clone();
    if let Some(cp) = &resume {
        if cp.rank != rank || cp.mult != mult_bound {
            return Err(FusionError::InvalidArgument(format!(
                "checkpoint is for rank {} multiplicity {}, run is rank {rank} multiplicity {mult_bound}",
                cp.rank, cp.mult
            )));
        }
        if !s_values.contains(&cp.self_dual) {
            return Err(FusionError::InvalidArgument(
                "checkpoint self-dual count not in this run".into(),
            ));
        }
        // Cells before the checkpointed one were already finished.
        s_values.retain(|&s| s <= cp.self_dual);
    }

    let mut budget = opts.max_nodes;
    let mut cells = Vec::new();
    let mut dedup: BTreeMap<CanonicalCode, FusionRing> = BTreeMap::new();
    let mut outcome = Outcome::Complete;
    let mut checkpoint = None;

    for &s in &s_values {
        let table = VariableTable::new(rank, mult_bound, s)?;
        let mut constraint_set = associativity_constraints(&table);
        constraint_set.extend(symmetry_constraints(&table));
        let plan = plan_search(&table, &constraint_set);

        let cell_resume = match resume.take_if(|cp| cp.self_dual == s) {
            Some(cp) => {
                if cp.plan_hash != plan.hash {
                    return Err(FusionError::InvalidArgument(
                        "checkpoint plan hash does not match this build".into(),
                    ));
                }
                Some(cp.counters)
            }
            None => None,
        };

        let run = run_cell(&table, &constraint_set, &plan, cell_resume, budget, threads, opts)?;
        if let Some(b) = budget.as_mut() {
            *b = b.saturating_sub(run.stats.nodes);
        }
        for sol in &run.solutions {
            let ring = table.expand(sol);
            debug_assert!(ring.validate().is_valid());
            let canon = canonical_form(&ring)?;
            dedup.entry(canon.code).or_insert(canon.ring);
        }
        cells.push(CellReport {
            self_dual: s,
            search_space: search_space_size(rank, mult_bound, s)?,
            stats: run.stats,
            outcome: run.outcome.clone(),
        });
        if run.outcome != Outcome::Complete {
            outcome = run.outcome;
            checkpoint = run.counters.map(|counters| Checkpoint {
                rank,
                mult: mult_bound,
                self_dual: s,
                plan_hash: plan.hash.clone(),
                counters,
            });
            break;
        }
    }

    let codes: Vec<CanonicalCode> = dedup.keys().cloned().collect();
    let names: Vec<Option<String>> = if outcome == Outcome::Complete {
        catalog_names(&codes).into_iter().map(Some).collect()
    } else {
        vec![None; codes.len()]
    };
    let rings = dedup
        .into_iter()
        .zip(names)
        .map(|((code, ring), name)| EnumeratedRing {
            below_bound: code.mult < mult_bound,
            ring,
            code,
            name,
        })
        .collect();

    Ok(Enumeration { rank, mult_bound, cells, rings, outcome, checkpoint })
}

fn run_cell(
    table: &VariableTable,
    constraint_set: &[Constraint],
    plan: &Plan,
    cell_resume: Option<Vec<u32>>,
    budget: Option<u64>,
    threads: usize,
    opts: &EnumOptions,
) -> Result<EngineRun> {
    let interrupt = opts.interrupt.as_deref();
    if threads == 1 || plan.order.is_empty() {
        return backtrack(
            table,
            constraint_set,
            plan,
            &EngineOptions { max_nodes: budget, resume: cell_resume, interrupt, pin_first: None },
        );
    }
    // Parallel mode: partition the outermost loop's value range. Budgets and
    // resume are single-threaded features and rejected upstream.
    if budget.is_some() {
        return Err(FusionError::InvalidArgument(
            "node budgets require a single-threaded run".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| FusionError::InvalidArgument(format!("thread pool: {e}")))?;
    let branches: Vec<EngineRun> = pool.install(|| {
        use rayon::prelude::*;
        (0..=table.mult)
            .into_par_iter()
            .map(|v| {
                backtrack(
                    table,
                    constraint_set,
                    plan,
                    &EngineOptions {
                        max_nodes: None,
                        resume: None,
                        interrupt,
                        pin_first: Some(v),
                    },
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut merged = EngineRun {
        solutions: Vec::new(),
        stats: SearchStats::default(),
        outcome: Outcome::Complete,
        counters: None,
    };
    for run in branches {
        merged.solutions.extend(run.solutions);
        merged.stats.merge(&run.stats);
        if run.outcome == Outcome::Interrupted {
            merged.outcome = Outcome::Interrupted;
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_and_two() {
        let one = enumerate_rings(1, 1, &EnumOptions::default()).unwrap();
        assert_eq!(one.rings.len(), 1);
        assert_eq!(one.rings[0].ring.rank(), 1);

        let two = enumerate_rings(2, 1, &EnumOptions::default()).unwrap();
        assert_eq!(two.rings.len(), 2);
        let names: Vec<_> = two.rings.iter().map(|r| r.name.clone().unwrap()).collect();
        assert_eq!(names, vec!["FR^{2,0}_{1}", "FR^{2,0}_{2}"]);
    }

    #[test]
    fn rank_three_multiplicity_one() {
        let res = enumerate_rings(3, 1, &EnumOptions::default()).unwrap();
        assert_eq!(res.outcome, Outcome::Complete);
        // Known: 4 multiplicity-free rank-3 fusion rings (Z3, Z2 x trivial
        // extension, Ising, and the rank-3 Fibonacci-like ring).
        for ring in &res.rings {
            assert!(ring.ring.validate().is_valid());
            assert!(ring.name.is_some());
        }
        assert_eq!(res.cells.len(), 2);
    }

    #[test]
    fn multiplicity_bound_flags() {
        let res = enumerate_rings(2, 2, &EnumOptions::default()).unwrap();
        assert_eq!(res.rings.len(), 3);
        let below: Vec<bool> = res.rings.iter().map(|r| r.below_bound).collect();
        assert_eq!(below.iter().filter(|&&b| b).count(), 2);
    }

    #[test]
    fn threads_do_not_change_results() {
        let seq = enumerate_rings(4, 1, &EnumOptions::default()).unwrap();
        let par =
            enumerate_rings(4, 1, &EnumOptions { threads: 4, ..Default::default() }).unwrap();
        let a: Vec<_> = seq.rings.iter().map(|r| r.code.clone()).collect();
        let b: Vec<_> = par.rings.iter().map(|r| r.code.clone()).collect();
        assert_eq!(a, b);
        assert_eq!(
            seq.rings.iter().map(|r| &r.name).collect::<Vec<_>>(),
            par.rings.iter().map(|r| &r.name).collect::<Vec<_>>()
        );
    }

    #[test]
    fn budget_checkpoint_resume_round_trip() {
        let full = enumerate_rings(4, 1, &EnumOptions::default()).unwrap();
        let mut seen = Vec::new();
        let mut resume: Option<Checkpoint> = None;
        let mut rounds = 0;
        loop {
            let res = enumerate_rings(
                4,
                1,
                &EnumOptions { max_nodes: Some(150), resume: resume.take(), ..Default::default() },
            )
            .unwrap();
            for r in res.rings {
                if !seen.contains(&r.code) {
                    seen.push(r.code);
                }
            }
            rounds += 1;
            match res.outcome {
                Outcome::Complete => break,
                _ => resume = res.checkpoint,
            }
            assert!(rounds < 1000, "resume loop did not terminate");
        }
        assert!(rounds > 1, "budget was not actually exercised");
        seen.sort();
        let want: Vec<_> = full.rings.iter().map(|r| r.code.clone()).collect();
        assert_eq!(seen, want);
    }

    #[test]
    fn self_dual_filter() {
        let res = enumerate_rings(
            3,
            1,
            &EnumOptions { self_dual: Some(1), ..Default::default() },
        )
        .unwrap();
        assert_eq!(res.cells.len(), 1);
        assert!(res.rings.iter().all(|r| r.ring.self_dual_count() == 1));
        assert!(enumerate_rings(3, 1, &EnumOptions { self_dual: Some(2), ..Default::default() })
            .is_err());
    }
}
