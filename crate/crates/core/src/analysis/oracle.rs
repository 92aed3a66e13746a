//! Exact Pareto front by enumerating every coalition.
//!
//! Feasibility here goes through the reference path (summed capability
//! vectors and a backtracking CSP solve per coalition), not the optimizers'
//! class-count evaluator, so the oracle shares no shortcut with what it checks.

use serde::{Deserialize, Serialize};

use crate::analysis::metrics::{Front, FrontPoint, OBJECTIVE_TOLERANCE};
use crate::csp::{build_csp, solve_csp};
use crate::error::{Error, Result};
use crate::model::{meets_capability_requirements, Coalition, Scenario};
use crate::objectives::{dominates, evaluate_objectives};

/// Largest robot count [`brute_force_front`] will enumerate (2^22 coalitions).
pub const ENUMERATION_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFront {
    pub front: Front,
    pub feasible_coalitions: usize,
    /// Whether any non-empty coalition is feasible at all.
    pub feasible: bool,
}

pub fn is_feasible_coalition(coalition: &Coalition, scenario: &Scenario) -> Result<bool> {
    if !meets_capability_requirements(coalition, scenario)? {
        return Ok(false);
    }
    let csp = build_csp(&scenario.task, coalition, scenario)?;
    Ok(solve_csp(&csp).is_some())
}

/// The exact front of feasible non-empty coalitions, one witness (the first
/// in enumeration order) per objective vector.
pub fn brute_force_front(scenario: &Scenario) -> Result<OracleFront> {
    let n = scenario.len();
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationBudget {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut points: Vec<FrontPoint> = Vec::new();
    let mut feasible_coalitions = 0;
    for code in 1u64..(1u64 << n) {
        let coalition = Coalition::from_bits((0..n).map(|i| code & (1 << i) != 0).collect());
        if !is_feasible_coalition(&coalition, scenario)? {
            continue;
        }
        feasible_coalitions += 1;
        let objectives = evaluate_objectives(&coalition, scenario)?;
        if points.iter().any(|p| {
            dominates(&p.objectives, &objectives) || p.objectives.approx_eq(&objectives, OBJECTIVE_TOLERANCE)
        }) {
            continue;
        }
        points.retain(|p| !dominates(&objectives, &p.objectives));
        points.push(FrontPoint {
            coalition,
            objectives,
        });
    }
    Ok(OracleFront {
        front: Front { points },
        feasible_coalitions,
        feasible: feasible_coalitions > 0,
    })
}
