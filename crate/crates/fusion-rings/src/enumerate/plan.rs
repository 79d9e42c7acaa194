//! Search planning: translate a constraint set into nested loop stages.
//!
//! Greedy construction: repeatedly pick the constraint introducing the fewest
//! still-unassigned variables (ties: smaller largest orbit id, then input
//! order). Its new variables become the next loop stage, and every constraint
//! whose variables are now all assigned is checked at the end of that stage.
//! Variables mentioned by no constraint are enumerated as trailing stages.

use sha2::{Digest, Sha256};

use super::constraints::Constraint;
use super::orbits::VariableTable;

#[derive(Clone, Debug)]
pub struct Stage {
    /// Orbit-variable ids assigned by this stage, ascending.
    pub vars: Vec<usize>,
    /// Constraint indices checkable once the stage is assigned.
    pub checks: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub stages: Vec<Stage>,
    /// All loop variables in nesting order (stage vars concatenated).
    pub order: Vec<usize>,
    /// Hash of the search cell and plan, pinned into checkpoints.
    pub hash: String,
}

pub fn plan_search(table: &VariableTable, constraints: &[Constraint]) -> Plan {
    let nvars = table.vars.len();
    let mut assigned = vec![false; nvars];
    let mut used = vec![false; constraints.len()];
    let mut stages: Vec<Stage> = Vec::new();

    // Constraints with no variables at all were dropped during compilation,
    // so every constraint eventually becomes checkable.
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (unknowns, max var, idx)
        for (idx, c) in constraints.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let vars = c.variables();
            let unknowns = vars.iter().filter(|&&v| !assigned[v]).count();
            let max_var = vars.iter().copied().max().unwrap_or(0);
            let key = (unknowns, max_var, idx);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let Some((_, _, pick)) = best else { break };
        let mut stage_vars: Vec<usize> =
            constraints[pick].variables().into_iter().filter(|&v| !assigned[v]).collect();
        stage_vars.sort_unstable();
        for &v in &stage_vars {
            assigned[v] = true;
        }
        let mut checks = Vec::new();
        for (idx, c) in constraints.iter().enumerate() {
            if !used[idx] && c.variables().iter().all(|&v| assigned[v]) {
                used[idx] = true;
                checks.push(idx);
            }
        }
        stages.push(Stage { vars: stage_vars, checks });
    }

    // Unconstrained variables form check-less trailing stages.
    let leftover: Vec<usize> = (0..nvars).filter(|&v| !assigned[v]).collect();
    if !leftover.is_empty() {
        stages.push(Stage { vars: leftover, checks: Vec::new() });
    }

    let order: Vec<usize> = stages.iter().flat_map(|s| s.vars.iter().copied()).collect();
    let hash = plan_hash(table, constraints, &stages);
    Plan { stages, order, hash }
}

fn plan_hash(table: &VariableTable, constraints: &[Constraint], stages: &[Stage]) -> String {
    let mut text = format!("cell r={} m={} s={}\n", table.rank, table.mult, table.self_dual);
    for v in &table.vars {
        text.push_str(&format!("var {} {:?}\n", v.orbit_id, v.representative));
    }
    for c in constraints {
        text.push_str(&format!("constraint {c:?}\n"));
    }
    for st in stages {
        text.push_str(&format!("stage {:?} checks {:?}\n", st.vars, st.checks));
    }
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
