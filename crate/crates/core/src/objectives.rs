//! Objectives, Pareto dominance and constraint handling.
//!
//! All three objectives are minimized:
//! - `time`: the slowest member's straight-line travel time to the target,
//! - `cost`: the sum of member deployment costs,
//! - `size`: the number of members.
//!
//! A coalition's feasibility degree is `sat_treq * w_task + sat_c * w_constraints`
//! where `sat_treq = u / U` is the fraction of non-zero requirement entries
//! the summed capabilities meet and `sat_c = m / M` the largest fraction of
//! locational constraints one robot assignment satisfies.

use serde::{Deserialize, Serialize};

use crate::csp::{self, build_csp, max_satisfied_constraints, Constraint, Relation};
use crate::error::{Error, Result};
use crate::model::{coalition_capabilities, CapabilityKind, Coalition, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub time: f64,
    pub cost: f64,
    pub size: usize,
}

impl ObjectiveVector {
    pub fn new(time: f64, cost: f64, size: usize) -> Self {
        Self { time, cost, size }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.time, self.cost, self.size as f64]
    }

    /// Component-wise `<=`.
    pub fn weakly_dominates(&self, other: &ObjectiveVector) -> bool {
        self.time <= other.time && self.cost <= other.cost && self.size <= other.size
    }

    pub fn approx_eq(&self, other: &ObjectiveVector, tol: f64) -> bool {
        self.size == other.size
            && close(self.time, other.time, tol)
            && close(self.cost, other.cost, tol)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

/// Strict Pareto dominance under minimization.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.weakly_dominates(b) && (a.time < b.time || a.cost < b.cost || a.size < b.size)
}

/// Objectives of a coalition. The empty coalition gets an infinite time.
pub fn evaluate_objectives(coalition: &Coalition, scenario: &Scenario) -> Result<ObjectiveVector> {
    coalition.check_len(scenario)?;
    let mut time = f64::NEG_INFINITY;
    let mut cost = 0.0;
    let mut size = 0;
    for i in coalition.members() {
        let robot = &scenario.robots[i];
        time = time.max(robot.travel_time(&scenario.target));
        cost += robot.deploy_cost;
        size += 1;
    }
    if size == 0 {
        time = f64::INFINITY;
    }
    Ok(ObjectiveVector { time, cost, size })
}

/// `(W_T, W_C)`: importance of capability requirements versus locational
/// constraints in the feasibility degree. Both in `[0, 1]`, summing to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityWeights {
    pub task: f64,
    pub constraints: f64,
}

impl Default for FeasibilityWeights {
    fn default() -> Self {
        Self {
            task: 0.5,
            constraints: 0.5,
        }
    }
}

impl FeasibilityWeights {
    pub fn new(task: f64, constraints: f64) -> Result<Self> {
        let w = Self { task, constraints };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.task) || !unit(self.constraints) || (self.task + self.constraints - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "feasibility weights must lie in [0, 1] and sum to 1, got ({}, {})",
                self.task, self.constraints
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub sat_treq: f64,
    pub sat_c: f64,
    pub degree: f64,
    /// Every requirement entry and every locational constraint is met.
    pub feasible: bool,
}

impl FeasibilityReport {
    /// `met` of `required` requirement entries, `satisfied` of `constraints`
    /// locational constraints. A zero denominator counts as fully satisfied.
    pub fn from_counts(
        met: usize,
        required: usize,
        satisfied: usize,
        constraints: usize,
        weights: FeasibilityWeights,
    ) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        let sat_treq = ratio(met, required);
        let sat_c = ratio(satisfied, constraints);
        Self {
            sat_treq,
            sat_c,
            degree: sat_treq * weights.task + sat_c * weights.constraints,
            feasible: met == required && satisfied == constraints,
        }
    }
}

/// Feasibility of a coalition: requirement entries met element-wise, and the
/// exact max-CSP count over its locational constraints.
pub fn feasibility_degree(
    coalition: &Coalition,
    scenario: &Scenario,
    weights: FeasibilityWeights,
) -> Result<FeasibilityReport> {
    weights.validate()?;
    let (sensing, actuating) = coalition_capabilities(coalition, scenario)?;
    let need_s = scenario.task.sensing_requirement();
    let need_a = scenario.task.actuating_requirement();
    let (mut met, mut required) = (0, 0);
    for (have, need) in sensing
        .entries()
        .iter()
        .zip(need_s.entries())
        .chain(actuating.entries().iter().zip(need_a.entries()))
    {
        if *need > 0.0 {
            required += 1;
            met += usize::from(have >= need);
        }
    }
    let csp = build_csp(&scenario.task, coalition, scenario)?;
    let ms = max_satisfied_constraints(&csp);
    Ok(FeasibilityReport::from_counts(met, required, ms.satisfied, ms.total, weights))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AWins,
    BWins,
    Neither,
}

/// Objectives and feasibility of one candidate coalition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objectives: ObjectiveVector,
    pub feasibility: FeasibilityReport,
}

impl Evaluation {
    pub fn is_feasible(&self) -> bool {
        self.feasibility.feasible
    }
}

/// A coalition together with its evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub position: Coalition,
    pub evaluation: Evaluation,
}

impl Solution {
    pub fn evaluate(position: Coalition, evaluator: &impl Evaluate) -> Self {
        let evaluation = evaluator.evaluate(&position);
        Self {
            position,
            evaluation,
        }
    }
}

/// Indices of the solutions no other solution beats, in input order.
pub fn nondominated_indices(solutions: &[Solution]) -> Vec<usize> {
    (0..solutions.len())
        .filter(|&i| {
            !solutions
                .iter()
                .any(|other| beats(&other.evaluation, &solutions[i].evaluation))
        })
        .collect()
}

/// Feasible beats infeasible; two feasible solutions compare by Pareto
/// dominance; two infeasible ones by feasibility degree.
pub fn constrained_better(a: &Evaluation, b: &Evaluation) -> Verdict {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Verdict::AWins,
        (false, true) => Verdict::BWins,
        (true, true) => {
            if dominates(&a.objectives, &b.objectives) {
                Verdict::AWins
            } else if dominates(&b.objectives, &a.objectives) {
                Verdict::BWins
            } else {
                Verdict::Neither
            }
        }
        (false, false) => {
            let (da, db) = (a.feasibility.degree, b.feasibility.degree);
            if da > db {
                Verdict::AWins
            } else if db > da {
                Verdict::BWins
            } else {
                Verdict::Neither
            }
        }
    }
}

/// `a` beats `b` under [`constrained_better`].
pub fn beats(a: &Evaluation, b: &Evaluation) -> bool {
    constrained_better(a, b) == Verdict::AWins
}

/// Aggregates gathered in one pass over a coalition's members.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionProfile {
    pub objectives: ObjectiveVector,
    /// Summed capabilities, sensing then actuating.
    pub capabilities: Vec<f64>,
    classes: Option<Box<[u32; CLASS_SLOTS]>>,
}

/// What every optimizer sees of the problem: a coalition goes in, objectives
/// and feasibility come out. Evaluation is split in two so that the cost of
/// the feasibility check can be measured on its own.
pub trait Evaluate {
    fn robots(&self) -> usize;

    fn profile(&self, coalition: &Coalition) -> CoalitionProfile;

    fn feasibility(&self, coalition: &Coalition, profile: &CoalitionProfile) -> FeasibilityReport;

    fn evaluate(&self, coalition: &Coalition) -> Evaluation {
        let profile = self.profile(coalition);
        Evaluation {
            feasibility: self.feasibility(coalition, &profile),
            objectives: profile.objectives,
        }
    }
}

impl<E: Evaluate + ?Sized> Evaluate for &E {
    fn robots(&self) -> usize {
        (**self).robots()
    }

    fn profile(&self, coalition: &Coalition) -> CoalitionProfile {
        (**self).profile(coalition)
    }

    fn feasibility(&self, coalition: &Coalition, profile: &CoalitionProfile) -> FeasibilityReport {
        (**self).feasibility(coalition, profile)
    }
}

/// Up to this many constrained capability kinds are tracked as class counts.
const MAX_TRACKED_KINDS: usize = 6;
const CLASS_SLOTS: usize = 1 << MAX_TRACKED_KINDS;

/// Per-scenario precomputation for fast evaluation.
///
/// Robots are grouped into classes by which constrained capability kinds
/// they own; a coalition's locational feasibility depends only on how many
/// members fall in each class, so the per-coalition check never revisits the
/// members.
#[derive(Debug, Clone)]
pub struct Evaluator {
    scenario: Scenario,
    weights: FeasibilityWeights,
    travel: Vec<f64>,
    cost: Vec<f64>,
    width: usize,
    caps: Vec<f64>,
    requirement: Vec<f64>,
    required: usize,
    locational: Locational,
}

#[derive(Debug, Clone)]
enum Locational {
    /// Class signature per robot (bit `v`: owns CSP variable `v`'s kind) and
    /// the constraint components over those variables.
    Classes {
        signature: Vec<u8>,
        components: Vec<Component>,
        total: usize,
    },
    /// Too many constrained kinds to track; build the CSP per coalition.
    PerCoalition,
}

#[derive(Debug, Clone)]
enum Component {
    Same { both: u64 },
    Different { left: u64, right: u64, both: u64 },
    General { constraints: Vec<Constraint> },
}

impl Evaluator {
    pub fn new(scenario: &Scenario, weights: FeasibilityWeights) -> Result<Self> {
        weights.validate()?;
        scenario.validate()?;
        let r = scenario.sensing_width();
        let width = r + scenario.actuating_width();
        let travel = scenario.robots.iter().map(|x| x.travel_time(&scenario.target)).collect();
        let cost = scenario.robots.iter().map(|x| x.deploy_cost).collect();
        let mut caps = Vec::with_capacity(scenario.len() * width);
        for robot in &scenario.robots {
            caps.extend_from_slice(robot.sensing.entries());
            caps.extend_from_slice(robot.actuating.entries());
        }
        let mut requirement = scenario.task.sensing_requirement().entries().to_vec();
        requirement.extend_from_slice(scenario.task.actuating_requirement().entries());
        let required = requirement.iter().filter(|v| **v > 0.0).count();

        Ok(Self {
            locational: Locational::compile(scenario),
            scenario: scenario.clone(),
            weights,
            travel,
            cost,
            width,
            caps,
            requirement,
            required,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn weights(&self) -> FeasibilityWeights {
        self.weights
    }
}

impl Locational {
    fn compile(scenario: &Scenario) -> Self {
        let r = scenario.sensing_width();
        let mut kinds: Vec<CapabilityKind> =
            scenario.task.constraints().flat_map(|c| [c.left, c.right]).collect();
        kinds.sort_by_key(|k| k.flat_index(r));
        kinds.dedup();
        if kinds.len() > MAX_TRACKED_KINDS {
            return Locational::PerCoalition;
        }
        let var = |k: CapabilityKind| kinds.iter().position(|x| *x == k).expect("collected");
        let constraints: Vec<Constraint> = scenario
            .task
            .constraints()
            .map(|c| Constraint {
                relation: c.relation,
                left: var(c.left),
                right: var(c.right),
            })
            .collect();
        let signature = scenario
            .robots
            .iter()
            .map(|robot| {
                kinds
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| k.quantity(robot) >= 1.0)
                    .fold(0u8, |sig, (v, _)| sig | (1 << v))
            })
            .collect();

        // Bitmask over class slots whose signature contains every given variable.
        let classes_with = |vars: &[usize]| -> u64 {
            (0..CLASS_SLOTS)
                .filter(|c| vars.iter().all(|v| c & (1 << v) != 0))
                .fold(0u64, |m, c| m | (1 << c))
        };
        let mut components = Vec::new();
        let mut seen = vec![false; constraints.len()];
        for start in 0..constraints.len() {
            if seen[start] {
                continue;
            }
            let mut vars = vec![constraints[start].left, constraints[start].right];
            let mut members = vec![start];
            seen[start] = true;
            let mut grew = true;
            while grew {
                grew = false;
                for (k, c) in constraints.iter().enumerate() {
                    if !seen[k] && (vars.contains(&c.left) || vars.contains(&c.right)) {
                        seen[k] = true;
                        members.push(k);
                        vars.extend([c.left, c.right]);
                        grew = true;
                    }
                }
            }
            let component = match members.as_slice() {
                [only] => {
                    let c = constraints[*only];
                    match c.relation {
                        Relation::SameRobot => Component::Same {
                            both: classes_with(&[c.left, c.right]),
                        },
                        Relation::DifferentRobot => Component::Different {
                            left: classes_with(&[c.left]),
                            right: classes_with(&[c.right]),
                            both: classes_with(&[c.left, c.right]),
                        },
                    }
                }
                _ => Component::General {
                    constraints: members.iter().map(|&k| constraints[k]).collect(),
                },
            };
            components.push(component);
        }
        Locational::Classes {
            signature,
            components,
            total: constraints.len(),
        }
    }
}

fn masked_count(counts: &[u32; CLASS_SLOTS], mut mask: u64) -> u32 {
    let mut total = 0;
    while mask != 0 {
        let c = mask.trailing_zeros() as usize;
        total += counts[c];
        mask &= mask - 1;
    }
    total
}

impl Component {
    fn satisfied(&self, counts: &[u32; CLASS_SLOTS], present: u64) -> usize {
        match self {
            Component::Same { both } => usize::from(present & both != 0),
            Component::Different { left, right, both } => {
                let dl = masked_count(counts, *left);
                let dr = masked_count(counts, *right);
                let shared = masked_count(counts, *both);
                usize::from(dl >= 1 && dr >= 1 && !(dl == 1 && dr == 1 && shared == 1))
            }
            Component::General { constraints } => {
                general_component(constraints, counts, present)
            }
        }
    }
}

/// Max-CSP of a multi-constraint component from class counts: each present
/// class contributes as many stand-in robots as it has kinds (or members, if
/// fewer), which is all any assignment could use.
fn general_component(
    constraints: &[Constraint],
    counts: &[u32; CLASS_SLOTS],
    present: u64,
) -> usize {
    let mut vars: Vec<usize> = constraints.iter().flat_map(|c| [c.left, c.right]).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut domains = vec![Vec::new(); vars.len()];
    let mut mask = present;
    while mask != 0 {
        let class = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        let reps = (counts[class] as usize).min(class.count_ones() as usize);
        for (local, &v) in vars.iter().enumerate() {
            if class & (1 << v) != 0 {
                domains[local].extend((0..reps).map(|j| class * CLASS_SLOTS + j));
            }
        }
    }
    let local = |v: usize| vars.binary_search(&v).expect("component variable");
    let variables_local = vars
        .iter()
        .enumerate()
        .map(|(id, _)| csp::CspVariable {
            id,
            capability: CapabilityKind::Sensing(id),
        })
        .collect();
    let remapped = constraints
        .iter()
        .map(|c| Constraint {
            relation: c.relation,
            left: local(c.left),
            right: local(c.right),
        })
        .collect();
    let instance = csp::CspInstance::new(variables_local, domains, remapped)
        .expect("component instance is well formed");
    max_satisfied_constraints(&instance).satisfied
}

impl Evaluate for Evaluator {
    fn robots(&self) -> usize {
        self.travel.len()
    }

    fn profile(&self, coalition: &Coalition) -> CoalitionProfile {
        debug_assert_eq!(coalition.len(), self.robots());
        let mut time = f64::NEG_INFINITY;
        let mut cost = 0.0;
        let mut size = 0;
        let mut capabilities = vec![0.0; self.width];
        let mut counts = match &self.locational {
            Locational::Classes { .. } => Some(Box::new([0u32; CLASS_SLOTS])),
            Locational::PerCoalition => None,
        };
        for (i, &member) in coalition.bits().iter().enumerate() {
            if !member {
                continue;
            }
            time = time.max(self.travel[i]);
            cost += self.cost[i];
            size += 1;
            let row = &self.caps[i * self.width..(i + 1) * self.width];
            for (acc, v) in capabilities.iter_mut().zip(row) {
                *acc += v;
            }
            if let (Some(counts), Locational::Classes { signature, .. }) = (&mut counts, &self.locational) {
                counts[signature[i] as usize] += 1;
            }
        }
        if size == 0 {
            time = f64::INFINITY;
        }
        CoalitionProfile {
            objectives: ObjectiveVector { time, cost, size },
            capabilities,
            classes: counts,
        }
    }

    fn feasibility(&self, coalition: &Coalition, profile: &CoalitionProfile) -> FeasibilityReport {
        let met = profile
            .capabilities
            .iter()
            .zip(&self.requirement)
            .filter(|(have, need)| **need > 0.0 && have >= need)
            .count();
        let (satisfied, total) = match (&self.locational, &profile.classes) {
            (
                Locational::Classes {
                    components, total, ..
                },
                Some(counts),
            ) => {
                // Class 0 owns none of the constrained kinds.
                let present = (1..CLASS_SLOTS)
                    .filter(|&c| counts[c] > 0)
                    .fold(0u64, |m, c| m | (1 << c));
                let satisfied = components
                    .iter()
                    .map(|comp| comp.satisfied(counts, present))
                    .sum();
                (satisfied, *total)
            }
            _ => {
                let csp = build_csp(&self.scenario.task, coalition, &self.scenario)
                    .expect("coalition sized for this scenario");
                let ms = max_satisfied_constraints(&csp);
                (ms.satisfied, ms.total)
            }
        };
        FeasibilityReport::from_counts(met, self.required, satisfied, total, self.weights)
    }
}
