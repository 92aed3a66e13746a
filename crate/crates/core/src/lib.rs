//! Multi-robot coalition formation as a constrained three-objective binary
//! optimization problem.
//!
//! A coalition is a bit-vector over a fleet; it is scored on travel time to
//! the target, deployment cost and size, and is feasible when its summed
//! capabilities cover the task and a robot assignment satisfies every
//! locational (same-robot / different-robot) constraint. The crate provides
//! a quantum-inspired binary particle swarm ([`qmopso`]), NSGA-II and SPEA-II
//! baselines, an exhaustive oracle, front metrics, Promethee II ranking and
//! the filter-optimize-rank-deploy [`pipeline`].
//!
//! ```
//! use coalition::{generate_scenario, qmopso, GenerationRanges, QmopsoParams};
//!
//! let scenario = generate_scenario(7, 12, &GenerationRanges::default()).unwrap();
//! let params = QmopsoParams { population: 40, iterations: 20, seed: 7, ..Default::default() };
//! let outcome = qmopso::run_on_scenario(&scenario, &params).unwrap();
//! assert!(!outcome.repository.is_empty());
//! ```

pub mod analysis;
pub mod baselines;
pub mod bench;
pub mod csp;
pub mod error;
pub mod generate;
pub mod model;
pub mod objectives;
pub mod pipeline;
pub mod qmopso;
pub mod report;
mod scenario_file;
pub mod timing;

pub use analysis::{
    brute_force_front, error_ratio, promethee_rank, reference_front, set_coverage, spacing, CriteriaWeights, Front,
    FrontPoint, OracleFront,
};
pub use baselines::{run_nsga2, run_spea2, EvoOutcome, EvoParams};
pub use bench::{run_benchmark, BenchReport, BenchmarkSpec, Variant};
pub use csp::{build_csp, max_satisfied_constraints, solve_csp, CspInstance};
pub use error::{Error, Result};
pub use generate::{generate_scenario, GenerationRanges};
pub use model::{
    filter_robots, CapabilityKind, CapabilityVector, Coalition, LocationalConstraint, Point, Relation, Robot,
    RobotState, Scenario, SubTask, Task, Thresholds,
};
pub use objectives::{
    beats, constrained_better, dominates, evaluate_objectives, feasibility_degree, Evaluate, Evaluation, Evaluator,
    FeasibilityReport, FeasibilityWeights, ObjectiveVector, Solution, Verdict,
};
pub use pipeline::{run_pipeline, Algorithm, Fleet, RunConfig, RunResult, ScenarioSource};
pub use qmopso::{InclusionRule, QmopsoParams, Repository};
pub use report::Format;
pub use timing::TimingBreakdown;
