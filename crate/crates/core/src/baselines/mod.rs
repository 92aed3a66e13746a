//! NSGA-II and SPEA-II over the same bit-vector encoding, evaluator and
//! constrained comparison as the swarm.
//!
//! Variation is binary: one-point crossover and per-bit flip mutation with
//! rate `mutation_prob / n`, so a child expects `mutation_prob` flips.

pub mod nsga2;
pub mod spea2;

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use nsga2::{crowding_distance, fast_nondominated_sort, run_nsga2};
pub use spea2::run_spea2;

use crate::error::{Error, Result};
use crate::model::Coalition;
use crate::objectives::{FeasibilityWeights, Solution};
use crate::timing::TimingBreakdown;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvoParams {
    pub population: usize,
    pub generations: usize,
    pub tournament_size: usize,
    /// Tournament winners drawn into the mating pool per generation.
    pub pool_size: usize,
    pub mutation_prob: f64,
    pub crossover_prob: f64,
    /// SPEA-II archive capacity.
    pub archive_size: usize,
    /// Accepted for configuration parity with real-coded operators; the
    /// binary operators here do not use them.
    pub crossover_distribution_index: f64,
    pub mutation_distribution_index: f64,
    pub feasibility: FeasibilityWeights,
    pub seed: u64,
}

impl EvoParams {
    /// Settings for a given population: binary tournaments, a pool of half
    /// the population, 10% mutation, 90% crossover, archive as large as the
    /// population.
    pub fn new(population: usize, generations: usize, seed: u64) -> Self {
        Self {
            population,
            generations,
            tournament_size: 2,
            pool_size: (population / 2).max(2),
            mutation_prob: 0.1,
            crossover_prob: 0.9,
            archive_size: population,
            crossover_distribution_index: 20.0,
            mutation_distribution_index: 20.0,
            feasibility: FeasibilityWeights::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.archive_size == 0 || self.pool_size == 0 {
            return Err(Error::params("population, archive and pool sizes must be positive"));
        }
        if self.tournament_size < 2 {
            return Err(Error::params("tournament size must be at least 2"));
        }
        for (name, p) in [("mutation", self.mutation_prob), ("crossover", self.crossover_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::params(format!("{name} probability must lie in [0, 1], got {p}")));
            }
        }
        self.feasibility.validate().map_err(|e| Error::params(e.to_string()))
    }
}

impl Default for EvoParams {
    fn default() -> Self {
        Self::new(100, 100, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvoOutcome {
    /// Final non-dominated solutions, one per position.
    pub front: Vec<Solution>,
    pub timing: TimingBreakdown,
}

pub(crate) fn random_position<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Coalition {
    Coalition::from_bits((0..n).map(|_| rng.random::<bool>()).collect())
}

/// Index of the tournament winner among `size` uniform draws (with
/// replacement); `better` orders candidates, ties go to the lower index.
pub(crate) fn tournament<R: Rng + ?Sized>(
    len: usize,
    size: usize,
    rng: &mut R,
    better: impl Fn(usize, usize) -> Ordering,
) -> usize {
    let mut best = rng.random_range(0..len);
    for _ in 1..size {
        let c = rng.random_range(0..len);
        match better(c, best) {
            Ordering::Less => best = c,
            Ordering::Equal if c < best => best = c,
            _ => {}
        }
    }
    best
}

/// Fills `count` children from random pairs of the mating pool.
pub(crate) fn breed<R: Rng + ?Sized>(pool: &[&Coalition], count: usize, params: &EvoParams, rng: &mut R) -> Vec<Coalition> {
    let mut children = Vec::with_capacity(count + 1);
    while children.len() < count {
        let a = pool[rng.random_range(0..pool.len())];
        let b = pool[rng.random_range(0..pool.len())];
        let (mut x, mut y) = if rng.random::<f64>() < params.crossover_prob {
            one_point_crossover(a, b, rng)
        } else {
            (a.clone(), b.clone())
        };
        mutate(&mut x, params.mutation_prob, rng);
        mutate(&mut y, params.mutation_prob, rng);
        children.push(x);
        children.push(y);
    }
    children.truncate(count);
    children
}

pub(crate) fn one_point_crossover<R: Rng + ?Sized>(a: &Coalition, b: &Coalition, rng: &mut R) -> (Coalition, Coalition) {
    let n = a.len();
    if n < 2 {
        return (a.clone(), b.clone());
    }
    let cut = rng.random_range(1..n);
    let join = |head: &Coalition, tail: &Coalition| {
        Coalition::from_bits(head.bits()[..cut].iter().chain(&tail.bits()[cut..]).copied().collect())
    };
    (join(a, b), join(b, a))
}

pub(crate) fn mutate<R: Rng + ?Sized>(c: &mut Coalition, mutation_prob: f64, rng: &mut R) {
    let rate = mutation_prob / c.len() as f64;
    for j in 0..c.len() {
        if rng.random::<f64>() < rate {
            let bit = c.contains(j);
            c.set(j, !bit);
        }
    }
}
