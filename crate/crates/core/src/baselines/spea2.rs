//! SPEA-II: strength/raw fitness, k-th nearest-neighbour density and a
//! fixed-size archive with distance-based truncation.
//!
//! Distances are Euclidean on objectives min-max normalized over the
//! current union of population and archive.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::nsga2::evaluate_timed;
use super::{breed, random_position, tournament, EvoOutcome, EvoParams};
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::objectives::{beats, Evaluate, Evaluator, Solution};
use crate::timing::{seconds_since, TimingBreakdown};

pub fn run_spea2(scenario: &Scenario, params: &EvoParams) -> Result<EvoOutcome> {
    params.validate()?;
    let evaluator = Evaluator::new(scenario, params.feasibility)?;
    run(&evaluator, params)
}

pub fn run(evaluator: &impl Evaluate, params: &EvoParams) -> Result<EvoOutcome> {
    params.validate()?;
    let n = evaluator.robots();
    if n == 0 {
        return Err(Error::invalid("cannot search coalitions over zero robots"));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut timing = TimingBreakdown::default();

    let initial = (0..params.population).map(|_| random_position(n, &mut rng)).collect();
    let (population, _) = evaluate_timed(initial, evaluator);
    let (mut archive, mut fitness) = environmental_selection(&population, &[], params.archive_size);
    for _ in 0..params.generations {
        let pool: Vec<_> = (0..params.pool_size)
            .map(|_| {
                let w = tournament(archive.len(), params.tournament_size, &mut rng, |a, b| {
                    fitness[a].total_cmp(&fitness[b])
                });
                &archive[w].position
            })
            .collect();
        let children = breed(&pool, params.population, params, &mut rng);

        let phase = Instant::now();
        let (offspring, feasibility) = evaluate_timed(children, evaluator);
        (archive, fitness) = environmental_selection(&offspring, &archive, params.archive_size);
        timing.repository_update.push(seconds_since(phase));
        timing.feasibility_check.push(feasibility);
    }
    let front = archive
        .into_iter()
        .zip(&fitness)
        .filter(|(_, f)| **f < 1.0)
        .map(|(s, _)| s)
        .collect();
    timing.total = seconds_since(start);
    Ok(EvoOutcome { front, timing })
}

/// The next archive and its members' fitness values.
fn environmental_selection(population: &[Solution], archive: &[Solution], size: usize) -> (Vec<Solution>, Vec<f64>) {
    let mut union: Vec<&Solution> = Vec::with_capacity(population.len() + archive.len());
    for s in population.iter().chain(archive) {
        if !union.iter().any(|u| u.position == s.position) {
            union.push(s);
        }
    }
    let m = union.len();
    let distances = normalized_distances(&union);
    let fitness = fitness(&union, &distances);

    let mut chosen: Vec<usize> = (0..m).filter(|&i| fitness[i] < 1.0).collect();
    if chosen.len() < size {
        let mut rest: Vec<usize> = (0..m).filter(|&i| fitness[i] >= 1.0).collect();
        rest.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
        chosen.extend(rest.into_iter().take(size - chosen.len()));
        chosen.sort_unstable();
    } else {
        truncate(&mut chosen, &distances, m, size);
    }
    let next = chosen.iter().map(|&i| union[i].clone()).collect();
    let fit = chosen.iter().map(|&i| fitness[i]).collect();
    (next, fit)
}

fn normalized_distances(union: &[&Solution]) -> Vec<f64> {
    let m = union.len();
    let raw: Vec<[f64; 3]> = union.iter().map(|s| s.evaluation.objectives.as_array()).collect();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &raw {
        for k in 0..3 {
            if p[k].is_finite() {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    // Non-finite values (the empty coalition's time) sit one range beyond the maximum.
    let scaled: Vec<[f64; 3]> = raw
        .iter()
        .map(|p| {
            let mut q = [0.0; 3];
            for k in 0..3 {
                let range = hi[k] - lo[k];
                q[k] = if !p[k].is_finite() {
                    2.0
                } else if range > 0.0 {
                    (p[k] - lo[k]) / range
                } else {
                    0.0
                };
            }
            q
        })
        .collect();
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = scaled[i]
                .iter()
                .zip(&scaled[j])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            d[i * m + j] = v;
            d[j * m + i] = v;
        }
    }
    d
}

/// Raw fitness (summed strengths of everyone beating `i`) plus density
/// `1 / (sigma_k + 2)` with `k = floor(sqrt(m))`.
fn fitness(union: &[&Solution], distances: &[f64]) -> Vec<f64> {
    let m = union.len();
    let mut strength = vec![0usize; m];
    let mut beaten_by: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if i != j && beats(&union[i].evaluation, &union[j].evaluation) {
                strength[i] += 1;
                beaten_by[j].push(i);
            }
        }
    }
    let k = ((m as f64).sqrt() as usize).max(1);
    (0..m)
        .map(|i| {
            let raw: usize = beaten_by[i].iter().map(|&j| strength[j]).sum();
            let mut row: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| distances[i * m + j]).collect();
            let sigma = if row.is_empty() {
                0.0
            } else {
                let kth = (k - 1).min(row.len() - 1);
                *row.select_nth_unstable_by(kth, f64::total_cmp).1
            };
            raw as f64 + 1.0 / (sigma + 2.0)
        })
        .collect()
}

/// Removes, one at a time, the member whose sorted distances to the other
/// members are lexicographically smallest, until `size` remain.
fn truncate(chosen: &mut Vec<usize>, distances: &[f64], m: usize, size: usize) {
    while chosen.len() > size {
        let sorted: Vec<Vec<f64>> = chosen
            .iter()
            .map(|&i| {
                let mut row: Vec<f64> = chosen.iter().filter(|&&j| j != i).map(|&j| distances[i * m + j]).collect();
                row.sort_by(f64::total_cmp);
                row
            })
            .collect();
        let mut victim = 0;
        for c in 1..chosen.len() {
            let closer = sorted[c]
                .iter()
                .zip(&sorted[victim])
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .is_some_and(|o| o.is_lt());
            if closer {
                victim = c;
            }
        }
        chosen.remove(victim);
    }
}
