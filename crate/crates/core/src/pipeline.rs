//! End-to-end coalition selection: filter the fleet by battery, optimize,
//! drop infeasible and over-threshold solutions, rank the rest and deploy
//! the winner.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::metrics::{error_ratio, spacing, Front};
use crate::analysis::oracle::{brute_force_front, ENUMERATION_LIMIT};
use crate::analysis::promethee::{promethee_rank, CriteriaWeights};
use crate::baselines::{run_nsga2, run_spea2, EvoParams};
use crate::error::{Error, Result};
use crate::generate::{generate_scenario, GenerationRanges};
use crate::model::{Coalition, RobotState, Scenario, Thresholds};
use crate::objectives::{Evaluation, Evaluator, FeasibilityWeights, Solution};
use crate::qmopso::{self, QmopsoParams};
use crate::timing::{seconds_since, TimingBreakdown};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Qmopso,
    Nsga2,
    Spea2,
    /// Exhaustive enumeration; exact but limited to small fleets.
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Qmopso, Algorithm::Nsga2, Algorithm::Spea2, Algorithm::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qmopso => "qmopso",
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Spea2 => "spea2",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm {s:?}; expected qmopso, nsga2, spea2 or brute")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioSource {
    File(PathBuf),
    Generated { seed: u64, robots: usize, ranges: GenerationRanges },
}

impl ScenarioSource {
    pub fn load(&self) -> Result<Scenario> {
        match self {
            ScenarioSource::File(path) => Scenario::load(path),
            ScenarioSource::Generated { seed, robots, ranges } => generate_scenario(*seed, *robots, ranges),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub iterations: usize,
    /// Battery percentage a robot needs to take part; `None` skips filtering.
    pub filter_threshold: Option<f64>,
    /// Overrides the task's own thresholds when set.
    pub thresholds: Option<Thresholds>,
    pub criteria: CriteriaWeights,
    pub feasibility: FeasibilityWeights,
    pub seed: u64,
    /// Also compare the result with the exact front (small fleets only).
    pub oracle_metrics: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Qmopso,
            population: 100,
            iterations: 100,
            filter_threshold: Some(40.0),
            thresholds: None,
            criteria: CriteriaWeights::default(),
            feasibility: FeasibilityWeights::default(),
            seed: 0,
            oracle_metrics: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.filter_threshold {
            if !(0.0..=100.0).contains(&t) {
                return Err(Error::params(format!("filter threshold must be a percentage, got {t}")));
            }
        }
        if let Some(t) = &self.thresholds {
            t.validate()?;
        }
        if self.population == 0 && self.algorithm != Algorithm::Brute {
            return Err(Error::params("population must be positive"));
        }
        self.criteria.validate()?;
        self.feasibility.validate()
    }

    pub fn qmopso_params(&self) -> QmopsoParams {
        QmopsoParams {
            population: self.population,
            iterations: self.iterations,
            criteria: self.criteria,
            feasibility: self.feasibility,
            seed: self.seed,
            ..QmopsoParams::default()
        }
    }

    pub fn evo_params(&self) -> EvoParams {
        EvoParams {
            feasibility: self.feasibility,
            ..EvoParams::new(self.population, self.iterations, self.seed)
        }
    }
}

/// One Pareto solution, in original fleet ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub members: Vec<usize>,
    #[serde(flatten)]
    pub evaluation: Evaluation,
    /// Feasible, non-empty and within every threshold.
    pub admitted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub spacing: Option<f64>,
    pub error_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub schema_version: u32,
    pub config: RunConfig,
    pub scenario_seed: u64,
    pub fleet_size: usize,
    /// Original ids of the robots the optimizer saw.
    pub candidates: Vec<usize>,
    pub pareto_set: Vec<SolutionRecord>,
    /// Index into `pareto_set`.
    pub selected: Option<usize>,
    pub metrics: RunMetrics,
    pub timing: TimingBreakdown,
}

impl RunResult {
    pub fn selected_solution(&self) -> Option<&SolutionRecord> {
        self.selected.map(|i| &self.pareto_set[i])
    }
}

/// Optimizer output on an already-filtered scenario.
pub fn optimize(scenario: &Scenario, config: &RunConfig) -> Result<(Vec<Solution>, TimingBreakdown)> {
    match config.algorithm {
        Algorithm::Qmopso => {
            let out = qmopso::run_on_scenario(scenario, &config.qmopso_params())?;
            Ok((out.repository.into_entries(), out.timing))
        }
        Algorithm::Nsga2 => {
            let out = run_nsga2(scenario, &config.evo_params())?;
            Ok((out.front, out.timing))
        }
        Algorithm::Spea2 => {
            let out = run_spea2(scenario, &config.evo_params())?;
            Ok((out.front, out.timing))
        }
        Algorithm::Brute => {
            let start = Instant::now();
            let evaluator = Evaluator::new(scenario, config.feasibility)?;
            let oracle = brute_force_front(scenario)?;
            let solutions = oracle
                .front
                .points
                .into_iter()
                .map(|p| Solution::evaluate(p.coalition, &evaluator))
                .collect();
            let timing = TimingBreakdown {
                total: seconds_since(start),
                ..TimingBreakdown::default()
            };
            Ok((solutions, timing))
        }
    }
}

/// A fleet whose robot states persist across runs, so successive selections
/// never share a robot until it is released.
#[derive(Debug, Clone)]
pub struct Fleet {
    scenario: Scenario,
    deployed: Vec<Coalition>,
}

impl Fleet {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            deployed: Vec::new(),
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Coalitions currently deployed, in original ids.
    pub fn deployed(&self) -> &[Coalition] {
        &self.deployed
    }

    pub fn busy(&self) -> usize {
        self.scenario.robots.iter().filter(|r| r.state == RobotState::Busy).count()
    }

    /// Finishes a deployed coalition, returning its robots to Idle.
    pub fn release(&mut self, coalition: &Coalition) -> Result<()> {
        let k = self
            .deployed
            .iter()
            .position(|c| c == coalition)
            .ok_or_else(|| Error::invalid("coalition is not deployed"))?;
        for i in coalition.members() {
            self.scenario.robots[i].transition(RobotState::Idle)?;
        }
        self.deployed.remove(k);
        Ok(())
    }

    /// Runs the whole pipeline over the currently idle robots.
    pub fn run(&mut self, config: &RunConfig) -> Result<RunResult> {
        config.validate()?;
        let start = Instant::now();
        let idle = self.scenario.robots.iter().filter(|r| r.state == RobotState::Idle);
        let candidates: Vec<usize> = match config.filter_threshold {
            Some(threshold) => idle.filter(|r| r.battery >= threshold).map(|r| r.id).collect(),
            None => idle.map(|r| r.id).collect(),
        };
        let filtering = if config.filter_threshold.is_some() {
            seconds_since(start)
        } else {
            0.0
        };

        for &i in &candidates {
            self.scenario.robots[i].transition(RobotState::Allocated)?;
        }
        let outcome = self.select(config, &candidates);
        let selected_members: Vec<usize> = match &outcome {
            Ok((records, Some(k), _, _)) => records[*k].members.clone(),
            _ => Vec::new(),
        };
        for &i in &candidates {
            let next = if selected_members.contains(&i) {
                RobotState::Busy
            } else {
                RobotState::Idle
            };
            self.scenario.robots[i].transition(next)?;
        }
        let (pareto_set, selected, metrics, mut timing) = outcome?;
        if selected.is_some() {
            self.deployed
                .push(Coalition::from_members(self.scenario.len(), &selected_members)?);
        }
        timing.filtering = filtering;
        timing.total = seconds_since(start);
        Ok(RunResult {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            scenario_seed: self.scenario.seed,
            fleet_size: self.scenario.len(),
            candidates,
            pareto_set,
            selected,
            metrics,
            timing,
        })
    }

    fn select(
        &self,
        config: &RunConfig,
        candidates: &[usize],
    ) -> Result<(Vec<SolutionRecord>, Option<usize>, RunMetrics, TimingBreakdown)> {
        let none = RunMetrics {
            spacing: None,
            error_ratio: None,
        };
        if candidates.is_empty() {
            return Ok((Vec::new(), None, none, TimingBreakdown::default()));
        }
        let (sub, ids) = self.scenario.restrict_to(candidates)?;
        let (solutions, timing) = optimize(&sub, config)?;
        let thresholds = config.thresholds.unwrap_or(self.scenario.task.thresholds);

        let pareto_set: Vec<SolutionRecord> = solutions
            .iter()
            .map(|s| {
                let o = s.evaluation.objectives;
                SolutionRecord {
                    members: s.position.members().map(|i| ids[i]).collect(),
                    evaluation: s.evaluation,
                    admitted: s.evaluation.is_feasible()
                        && s.position.has_members()
                        && thresholds.admits(o.time, o.cost, o.size),
                }
            })
            .collect();
        let admitted: Vec<usize> = (0..pareto_set.len()).filter(|&i| pareto_set[i].admitted).collect();
        let selected = match admitted.len() {
            0 => None,
            1 => Some(admitted[0]),
            _ => {
                let objectives: Vec<_> = admitted.iter().map(|&i| pareto_set[i].evaluation.objectives).collect();
                Some(admitted[promethee_rank(&objectives, &config.criteria)?.best()])
            }
        };

        let front = Front::from_solutions(&solutions);
        let mut metrics = RunMetrics {
            spacing: spacing(&front).ok(),
            error_ratio: None,
        };
        if config.oracle_metrics && sub.len() <= ENUMERATION_LIMIT {
            let oracle = brute_force_front(&sub)?;
            metrics.error_ratio = error_ratio(&front, &oracle.front).ok();
        }
        Ok((pareto_set, selected, metrics, timing))
    }
}

/// Loads the scenario and runs the pipeline once on a fresh fleet.
pub fn run_pipeline(source: &ScenarioSource, config: &RunConfig) -> Result<RunResult> {
    Fleet::new(source.load()?).run(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::LocationalConstraint;
    use crate::model::CapabilityKind::{Actuating, Sensing};

    fn config(algorithm: Algorithm) -> RunConfig {
        RunConfig {
            algorithm,
            population: 30,
            iterations: 20,
            filter_threshold: Some(40.0),
            seed: 7,
            ..RunConfig::default()
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("pso".parse::<Algorithm>().is_err());
    }

    #[test]
    fn forced_single_coalition_is_selected() {
        // Only robot 2 carries both capabilities on one body.
        let mut robots = vec![
            robot(0, &[1.0], &[0.0]),
            robot(1, &[0.0], &[1.0]),
            robot(2, &[1.0], &[1.0]),
        ];
        robots[0].battery = 10.0;
        let s = scenario(
            robots,
            task(&[1.0], &[1.0], vec![LocationalConstraint::same(Sensing(0), Actuating(0))]),
        );
        for algorithm in Algorithm::ALL {
            let mut fleet = Fleet::new(s.clone());
            let result = fleet.run(&config(algorithm)).unwrap();
            assert_eq!(result.candidates, vec![1, 2]);
            assert_eq!(result.selected_solution().unwrap().members, vec![2], "{algorithm}");
            assert_eq!(fleet.busy(), 1);
            assert_eq!(fleet.scenario().robots[2].state, RobotState::Busy);
            assert!(fleet.scenario().robots.iter().all(|r| r.state != RobotState::Allocated));
        }
    }

    #[test]
    fn thresholds_can_exclude_everything() {
        let s = scenario(
            vec![robot(0, &[1.0], &[1.0]), robot(1, &[1.0], &[1.0])],
            task(&[1.0], &[1.0], vec![]),
        );
        let mut fleet = Fleet::new(s);
        let cfg = RunConfig {
            thresholds: Some(Thresholds {
                max_cost: Some(0.5),
                ..Thresholds::default()
            }),
            ..config(Algorithm::Brute)
        };
        let result = fleet.run(&cfg).unwrap();
        assert!(result.selected.is_none());
        assert!(!result.pareto_set.is_empty());
        assert!(fleet.scenario().robots.iter().all(|r| r.state == RobotState::Idle));

        // A cost exactly at the threshold is kept.
        let cfg = RunConfig {
            thresholds: Some(Thresholds {
                max_cost: Some(1.0),
                ..Thresholds::default()
            }),
            ..config(Algorithm::Brute)
        };
        assert!(Fleet::new(fleet.scenario().clone()).run(&cfg).unwrap().selected.is_some());
    }

    #[test]
    fn successive_runs_use_disjoint_robots() {
        let robots = (0..4).map(|i| robot(i, &[1.0], &[1.0])).collect();
        let mut fleet = Fleet::new(scenario(robots, task(&[1.0], &[1.0], vec![])));
        let mut taken = Vec::new();
        for _ in 0..4 {
            let r = fleet.run(&config(Algorithm::Brute)).unwrap();
            let members = r.selected_solution().unwrap().members.clone();
            assert!(members.iter().all(|m| !taken.contains(m)));
            taken.extend(members);
        }
        assert_eq!(fleet.busy(), 4);
        let fifth = fleet.run(&config(Algorithm::Brute)).unwrap();
        assert!(fifth.selected.is_none() && fifth.candidates.is_empty());

        let first = fleet.deployed()[0].clone();
        fleet.release(&first).unwrap();
        assert_eq!(fleet.busy(), 3);
        assert!(fleet.run(&config(Algorithm::Brute)).unwrap().selected.is_some());
    }
}
