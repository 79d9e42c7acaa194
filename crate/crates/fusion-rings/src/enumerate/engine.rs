//! Iterative backtracking engine.
//!
//! Runs the nested loops described by a [`Plan`] as an explicit odometer so
//! the complete engine state is the vector of loop counters. That vector is
//! what checkpoints store: resuming re-walks the prefix deterministically and
//! continues exactly where the previous run stopped.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{FusionError, Result};

use super::constraints::Constraint;
use super::orbits::VariableTable;
use super::plan::Plan;

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    /// Variable assignments tried.
    pub nodes: u64,
    /// Constraint evaluations.
    pub checks: u64,
    /// Assignments satisfying every constraint.
    pub solutions: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.checks += other.checks;
        self.solutions += other.solutions;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    BudgetExhausted,
    Interrupted,
}

#[derive(Clone, Debug)]
pub struct EngineRun {
    /// Satisfying assignments indexed by orbit-variable id.
    pub solutions: Vec<Vec<u32>>,
    pub stats: SearchStats,
    pub outcome: Outcome,
    /// Loop counters to resume from, when the run did not complete.
    pub counters: Option<Vec<u32>>,
}

#[derive(Default)]
pub struct EngineOptions<'a> {
    /// Stop after this many assignments (checkpointable).
    pub max_nodes: Option<u64>,
    /// Loop counters from a previous run's checkpoint.
    pub resume: Option<Vec<u32>>,
    /// Cooperative interruption flag, polled periodically.
    pub interrupt: Option<&'a AtomicBool>,
    /// Restrict the outermost loop to this value (parallel partitioning).
    pub pin_first: Option<u32>,
}

pub fn backtrack(
    table: &VariableTable,
    constraints: &[Constraint],
    plan: &Plan,
    opts: &EngineOptions,
) -> Result<EngineRun> {
    let nvars = plan.order.len();
    let m = table.mult;
    let mut stats = SearchStats::default();
    let mut solutions = Vec::new();

    if nvars == 0 {
        // Rank-1 style cell: the empty assignment is the sole candidate.
        stats.nodes = 1;
        stats.solutions = 1;
        solutions.push(Vec::new());
        return Ok(EngineRun { solutions, stats, outcome: Outcome::Complete, counters: None });
    }

    // checks_at[p]: constraint ids to run right after position p is assigned.
    let mut checks_at: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    {
        let mut pos = 0usize;
        for stage in &plan.stages {
            pos += stage.vars.len();
            checks_at[pos - 1] = stage.checks.clone();
        }
    }

    let mut cur: Vec<u32> = match &opts.resume {
        Some(c) => {
            if c.len() != nvars {
                return Err(FusionError::InvalidArgument(format!(
                    "checkpoint has {} counters, plan expects {nvars}",
                    c.len()
                )));
            }
            c.clone()
        }
        None => vec![0; nvars],
    };
    if let Some(v) = opts.pin_first {
        cur[0] = v;
    }
    let first_range_end = opts.pin_first.unwrap_or(m);

    let mut vals = vec![0u32; table.vars.len()];
    let mut pos = 0usize;
    loop {
        if stats.nodes % 1024 == 0 {
            if let Some(flag) = opts.interrupt {
                if flag.load(Ordering::Relaxed) {
                    return Ok(EngineRun {
                        solutions,
                        stats,
                        outcome: Outcome::Interrupted,
                        counters: Some(cur),
                    });
                }
            }
        }
        if let Some(budget) = opts.max_nodes {
            if stats.nodes >= budget {
                return Ok(EngineRun {
                    solutions,
                    stats,
                    outcome: Outcome::BudgetExhausted,
                    counters: Some(cur),
                });
            }
        }

        let limit = if pos == 0 { first_range_end } else { m };
        if cur[pos] > limit {
            // Range exhausted: backtrack.
            cur[pos] = 0;
            if pos == 0 {
                return Ok(EngineRun { solutions, stats, outcome: Outcome::Complete, counters: None });
            }
            pos -= 1;
            cur[pos] += 1;
            continue;
        }

        vals[plan.order[pos]] = cur[pos];
        stats.nodes += 1;
        let mut ok = true;
        for &ci in &checks_at[pos] {
            stats.checks += 1;
            if !constraints[ci].eval(&vals) {
                ok = false;
                break;
            }
        }
        if !ok {
            cur[pos] += 1;
        } else if pos + 1 == nvars {
            stats.solutions += 1;
            solutions.push(vals.clone());
            cur[pos] += 1;
        } else {
            pos += 1;
        }
    }
}

/// Resumable position of an interrupted enumeration cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub rank: usize,
    pub mult: u32,
    pub self_dual: usize,
    pub plan_hash: String,
    pub counters: Vec<u32>,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let counters =
            self.counters.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        format!(
            "fusion-rings checkpoint v1\nrank {}\nmultiplicity {}\nself_dual {}\nplan_hash {}\ncounters {}\n",
            self.rank, self.mult, self.self_dual, self.plan_hash, counters
        )
    }

    pub fn from_text(text: &str) -> Result<Checkpoint> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header.trim() != "fusion-rings checkpoint v1" {
            return Err(FusionError::InvalidArgument("unrecognised checkpoint header".into()));
        }
        let mut rank = None;
        let mut mult = None;
        let mut self_dual = None;
        let mut plan_hash = None;
        let mut counters = None;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| FusionError::InvalidArgument(format!("bad checkpoint line: {line}")))?;
            let parse_err =
                |e: std::num::ParseIntError| FusionError::InvalidArgument(format!("checkpoint: {e}"));
            match key {
                "rank" => rank = Some(value.parse().map_err(parse_err)?),
                "multiplicity" => mult = Some(value.parse().map_err(parse_err)?),
                "self_dual" => self_dual = Some(value.parse().map_err(parse_err)?),
                "plan_hash" => plan_hash = Some(value.to_string()),
                "counters" => {
                    counters = Some(
                        value
                            .split_whitespace()
                            .map(|t| t.parse().map_err(parse_err))
                            .collect::<Result<Vec<u32>>>()?,
                    )
                }
                other => {
                    return Err(FusionError::InvalidArgument(format!(
                        "unknown checkpoint field: {other}"
                    )))
                }
            }
        }
        match (rank, mult, self_dual, plan_hash) {
            (Some(rank), Some(mult), Some(self_dual), Some(plan_hash)) => Ok(Checkpoint {
                rank,
                mult,
                self_dual,
                plan_hash,
                counters: counters.unwrap_or_default(),
            }),
            _ => Err(FusionError::InvalidArgument("incomplete checkpoint".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::constraints::{associativity_constraints, symmetry_constraints};
    use crate::enumerate::plan::plan_search;

    fn cell(r: usize, m: u32, s: usize) -> (VariableTable, Vec<Constraint>, Plan) {
        let table = VariableTable::new(r, m, s).unwrap();
        let mut constraints = associativity_constraints(&table);
        constraints.extend(symmetry_constraints(&table));
        let plan = plan_search(&table, &constraints);
        (table, constraints, plan)
    }

    #[test]
    fn rank_two_solutions() {
        let (table, constraints, plan) = cell(2, 1, 2);
        let run = backtrack(&table, &constraints, &plan, &EngineOptions::default()).unwrap();
        assert_eq!(run.outcome, Outcome::Complete);
        assert_eq!(run.solutions.len(), 2);
        for sol in &run.solutions {
            assert!(table.expand(sol).validate().is_valid());
        }
    }

    #[test]
    fn solutions_are_valid_rings() {
        for s in [3, 1] {
            let (table, constraints, plan) = cell(3, 2, s);
            let run = backtrack(&table, &constraints, &plan, &EngineOptions::default()).unwrap();
            assert_eq!(run.outcome, Outcome::Complete);
            assert!(!run.solutions.is_empty());
            for sol in &run.solutions {
                let ring = table.expand(sol);
                let report = ring.validate();
                assert!(report.is_valid(), "{sol:?}: {:?}", report.violations);
            }
        }
    }

    #[test]
    fn budget_and_resume_reproduce_full_run() {
        let (table, constraints, plan) = cell(4, 1, 4);
        let full = backtrack(&table, &constraints, &plan, &EngineOptions::default()).unwrap();
        assert_eq!(full.outcome, Outcome::Complete);

        // Chop the run into slices and stitch the solutions back together.
        let mut collected = Vec::new();
        let mut resume = None;
        loop {
            let run = backtrack(
                &table,
                &constraints,
                &plan,
                &EngineOptions { max_nodes: Some(500), resume: resume.take(), ..Default::default() },
            )
            .unwrap();
            collected.extend(run.solutions);
            match run.outcome {
                Outcome::Complete => break,
                Outcome::BudgetExhausted => resume = run.counters,
                Outcome::Interrupted => unreachable!(),
            }
        }
        assert_eq!(collected, full.solutions);
    }

    #[test]
    fn pinned_branches_partition_the_space() {
        let (table, constraints, plan) = cell(3, 2, 3);
        let full = backtrack(&table, &constraints, &plan, &EngineOptions::default()).unwrap();
        let mut stitched = Vec::new();
        for v in 0..=2 {
            let run = backtrack(
                &table,
                &constraints,
                &plan,
                &EngineOptions { pin_first: Some(v), ..Default::default() },
            )
            .unwrap();
            stitched.extend(run.solutions);
        }
        assert_eq!(stitched, full.solutions);
    }

    #[test]
    fn interrupt_stops_early() {
        let flag = AtomicBool::new(true);
        let (table, constraints, plan) = cell(4, 2, 4);
        let run = backtrack(
            &table,
            &constraints,
            &plan,
            &EngineOptions { interrupt: Some(&flag), ..Default::default() },
        )
        .unwrap();
        assert_eq!(run.outcome, Outcome::Interrupted);
        assert!(run.counters.is_some());
    }

    #[test]
    fn checkpoint_text_round_trip() {
        let cp = Checkpoint {
            rank: 5,
            mult: 2,
            self_dual: 3,
            plan_hash: "abc123".into(),
            counters: vec![0, 2, 1],
        };
        let text = cp.to_text();
        assert_eq!(Checkpoint::from_text(&text).unwrap(), cp);
        assert!(Checkpoint::from_text("garbage").is_err());
    }
}
