//! Quantum-inspired binary multi-objective particle swarm.
//!
//! Each particle holds a velocity in `[0, 1]^n` and samples its coalition
//! from it every iteration. The global best is the Promethee II top entry of
//! an unbounded repository kept non-dominated under the constrained rule.

mod particle;
mod repository;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use particle::{init_swarm, sample_position, update_velocity, Particle};
pub use repository::Repository;

use crate::analysis::promethee::CriteriaWeights;
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::objectives::{nondominated_indices, Evaluate, Evaluation, Evaluator, FeasibilityWeights, Solution};
use crate::timing::{seconds_since, TimingBreakdown};

/// Which side of the velocity a uniform draw must fall on to set a bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionRule {
    /// Bit set iff draw > velocity: a high velocity makes inclusion unlikely.
    #[default]
    DrawAboveVelocity,
    /// The usual binary-PSO reading: bit set iff draw < velocity.
    DrawBelowVelocity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QmopsoParams {
    pub population: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub alpha: f64,
    pub beta: f64,
    pub criteria: CriteriaWeights,
    pub feasibility: FeasibilityWeights,
    pub seed: u64,
    pub inclusion: InclusionRule,
}

impl Default for QmopsoParams {
    fn default() -> Self {
        Self {
            population: 100,
            iterations: 100,
            inertia: 0.25,
            cognitive: 0.25,
            social: 0.5,
            alpha: 0.3,
            beta: 0.7,
            criteria: CriteriaWeights::default(),
            feasibility: FeasibilityWeights::default(),
            seed: 0,
            inclusion: InclusionRule::default(),
        }
    }
}

impl QmopsoParams {
    /// `iterations = 0` is allowed and returns the initial repository.
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::params("population must be positive"));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::params(format!("{name} weight must be finite and non-negative, got {v}")));
            }
        }
        let open = |v: f64| v > 0.0 && v < 1.0;
        if !open(self.alpha) || !open(self.beta) || (self.alpha + self.beta - 1.0).abs() > 1e-9 {
            return Err(Error::params(format!(
                "alpha and beta must lie in (0, 1) and sum to 1, got ({}, {})",
                self.alpha, self.beta
            )));
        }
        self.criteria.validate().map_err(|e| Error::params(e.to_string()))?;
        self.feasibility.validate().map_err(|e| Error::params(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmopsoOutcome {
    pub repository: Repository,
    pub timing: TimingBreakdown,
}

/// Builds an [`Evaluator`] for `scenario` and runs the swarm on it.
pub fn run_on_scenario(scenario: &Scenario, params: &QmopsoParams) -> Result<QmopsoOutcome> {
    params.validate()?;
    let evaluator = Evaluator::new(scenario, params.feasibility)?;
    run(&evaluator, params)
}

pub fn run(evaluator: &impl Evaluate, params: &QmopsoParams) -> Result<QmopsoOutcome> {
    run_with_observer(evaluator, params, |_, _, _| {})
}

/// As [`run`], calling `observer(iteration, repository, swarm)` after the
/// initial repository is built (iteration 0) and after every iteration.
pub fn run_with_observer(
    evaluator: &impl Evaluate,
    params: &QmopsoParams,
    mut observer: impl FnMut(usize, &Repository, &[Particle]),
) -> Result<QmopsoOutcome> {
    params.validate()?;
    if evaluator.robots() == 0 {
        return Err(Error::invalid("cannot search coalitions over zero robots"));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut timing = TimingBreakdown::default();

    let mut swarm = init_swarm(params, evaluator, &mut rng);
    let mut repository = Repository::new();
    repository.update(current_nondominated(&swarm));
    observer(0, &repository, &swarm);

    for t in 1..=params.iterations {
        let g = repository.select_global_best(&params.criteria)?;
        let global_best = repository.entries()[g].position.clone();
        for p in &mut swarm {
            p.velocity = update_velocity(&p.velocity, &p.local_best.position, &global_best, params);
            p.current.position = sample_position(&p.velocity, params.inclusion, &mut rng);
        }

        let phase = Instant::now();
        let profiles: Vec<_> = swarm.iter().map(|p| evaluator.profile(&p.current.position)).collect();
        let check = Instant::now();
        let reports: Vec<_> = swarm
            .iter()
            .zip(&profiles)
            .map(|(p, profile)| evaluator.feasibility(&p.current.position, profile))
            .collect();
        let feasibility = seconds_since(check);
        for ((p, profile), report) in swarm.iter_mut().zip(profiles).zip(reports) {
            p.current.evaluation = Evaluation {
                objectives: profile.objectives,
                feasibility: report,
            };
            p.update_local_best();
        }
        repository.update(current_nondominated(&swarm));
        timing.repository_update.push(seconds_since(phase));
        timing.feasibility_check.push(feasibility);
        observer(t, &repository, &swarm);
    }
    timing.total = seconds_since(start);
    Ok(QmopsoOutcome { repository, timing })
}

fn current_nondominated(swarm: &[Particle]) -> Vec<Solution> {
    let current: Vec<Solution> = swarm.iter().map(|p| p.current.clone()).collect();
    nondominated_indices(&current)
        .into_iter()
        .map(|i| current[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_scenario, GenerationRanges};
    use crate::objectives::beats;

    fn small(seed: u64) -> Scenario {
        generate_scenario(seed, 10, &GenerationRanges::default()).unwrap()
    }

    #[test]
    fn defaults_are_the_published_settings() {
        let p = QmopsoParams::default();
        assert_eq!((p.inertia, p.cognitive, p.social), (0.25, 0.25, 0.5));
        assert_eq!((p.alpha, p.beta), (0.3, 0.7));
        assert_eq!(p.inclusion, InclusionRule::DrawAboveVelocity);
        p.validate().unwrap();
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            QmopsoParams { population: 0, ..Default::default() },
            QmopsoParams { alpha: 0.5, beta: 0.6, ..Default::default() },
            QmopsoParams { alpha: 0.0, beta: 1.0, ..Default::default() },
            QmopsoParams { inertia: -0.1, ..Default::default() },
        ];
        for p in bad {
            assert!(matches!(run_on_scenario(&small(1), &p), Err(Error::InvalidParams(_))));
        }
    }

    #[test]
    fn zero_iterations_keep_initial_repository() {
        let s = small(2);
        let params = QmopsoParams { iterations: 0, ..Default::default() };
        let eval = Evaluator::new(&s, params.feasibility).unwrap();
        let mut initial = None;
        let out = run_with_observer(&eval, &params, |t, rep, _| {
            assert_eq!(t, 0);
            initial = Some(rep.clone());
        })
        .unwrap();
        assert_eq!(Some(out.repository), initial);
        assert!(out.timing.repository_update.is_empty());
    }

    #[test]
    fn deterministic_per_seed() {
        let s = small(3);
        let params = QmopsoParams { population: 30, iterations: 20, seed: 9, ..Default::default() };
        let a = run_on_scenario(&s, &params).unwrap();
        let b = run_on_scenario(&s, &params).unwrap();
        assert_eq!(a.repository, b.repository);
        assert_eq!(a.timing.repository_update.len(), 20);
    }

    #[test]
    fn repository_stays_non_dominated() {
        let s = small(4);
        let params = QmopsoParams { population: 40, iterations: 30, seed: 1, ..Default::default() };
        let eval = Evaluator::new(&s, params.feasibility).unwrap();
        run_with_observer(&eval, &params, |_, rep, _| {
            let e = rep.entries();
            for a in e {
                for b in e {
                    assert!(!beats(&a.evaluation, &b.evaluation));
                }
            }
            if e.iter().any(|x| x.evaluation.is_feasible()) {
                assert!(e.iter().all(|x| x.evaluation.is_feasible()));
            }
        })
        .unwrap();
    }
}
