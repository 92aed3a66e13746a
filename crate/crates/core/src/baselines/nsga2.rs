//! NSGA-II with constrained non-dominated sorting.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{breed, random_position, tournament, EvoOutcome, EvoParams};
use crate::error::{Error, Result};
use crate::model::{Coalition, Scenario};
use crate::objectives::{beats, Evaluate, Evaluation, Evaluator, Solution};
use crate::timing::{seconds_since, TimingBreakdown};

/// Partition into fronts: members of front `k` are beaten by nobody once
/// fronts `0..k` are removed. Fronts list indices in ascending order.
pub fn fast_nondominated_sort(evaluations: &[Evaluation]) -> Vec<Vec<usize>> {
    let n = evaluations.len();
    let mut beaten_by = vec![0usize; n];
    let mut beats_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if beats(&evaluations[i], &evaluations[j]) {
                beats_list[i].push(j);
                beaten_by[j] += 1;
            } else if beats(&evaluations[j], &evaluations[i]) {
                beats_list[j].push(i);
                beaten_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| beaten_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &beats_list[i] {
                beaten_by[j] -= 1;
                if beaten_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each front member: boundary points per objective
/// get infinity, interior points the sum of normalized neighbour gaps.
pub fn crowding_distance(front: &[Evaluation]) -> Vec<f64> {
    let k = front.len();
    let mut distance = vec![0.0; k];
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    for m in 0..3 {
        let value = |i: usize| front[i].objectives.as_array()[m];
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        distance[order[0]] = f64::INFINITY;
        distance[order[k - 1]] = f64::INFINITY;
        let range = value(order[k - 1]) - value(order[0]);
        if !(range.is_finite() && range > 0.0) {
            continue;
        }
        for w in order.windows(3) {
            let gap = value(w[2]) - value(w[0]);
            if gap.is_finite() {
                distance[w[1]] += gap / range;
            }
        }
    }
    distance
}

pub fn run_nsga2(scenario: &Scenario, params: &EvoParams) -> Result<EvoOutcome> {
    params.validate()?;
    let evaluator = Evaluator::new(scenario, params.feasibility)?;
    run(&evaluator, params)
}

/// Generational NSGA-II on any evaluator.
pub fn run(evaluator: &impl Evaluate, params: &EvoParams) -> Result<EvoOutcome> {
    params.validate()?;
    let n = evaluator.robots();
    if n == 0 {
        return Err(Error::invalid("cannot search coalitions over zero robots"));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut timing = TimingBreakdown::default();

    let mut population: Vec<Solution> = (0..params.population)
        .map(|_| Solution::evaluate(random_position(n, &mut rng), evaluator))
        .collect();
    let (mut rank, mut crowding) = rank_and_crowd(&population);

    for _ in 0..params.generations {
        let pool: Vec<_> = (0..params.pool_size)
            .map(|_| {
                let w = tournament(population.len(), params.tournament_size, &mut rng, |a, b| {
                    rank[a].cmp(&rank[b]).then(crowding[b].total_cmp(&crowding[a]))
                });
                &population[w].position
            })
            .collect();
        let children = breed(&pool, params.population, params, &mut rng);

        let phase = Instant::now();
        let (offspring, feasibility) = evaluate_timed(children, evaluator);
        population.extend(offspring);
        population = survivors(population, params.population);
        let ranked = rank_and_crowd(&population);
        rank = ranked.0;
        crowding = ranked.1;
        timing.repository_update.push(seconds_since(phase));
        timing.feasibility_check.push(feasibility);
    }

    let evaluations: Vec<Evaluation> = population.iter().map(|s| s.evaluation).collect();
    let first = fast_nondominated_sort(&evaluations).into_iter().next().unwrap_or_default();
    let mut front: Vec<Solution> = Vec::with_capacity(first.len());
    for i in first {
        if !front.iter().any(|s| s.position == population[i].position) {
            front.push(population[i].clone());
        }
    }
    timing.total = seconds_since(start);
    Ok(EvoOutcome { front, timing })
}

/// Evaluates positions, returning the seconds spent on feasibility alone.
pub(crate) fn evaluate_timed(positions: Vec<Coalition>, evaluator: &impl Evaluate) -> (Vec<Solution>, f64) {
    let profiles: Vec<_> = positions.iter().map(|p| evaluator.profile(p)).collect();
    let check = Instant::now();
    let reports: Vec<_> = positions
        .iter()
        .zip(&profiles)
        .map(|(p, profile)| evaluator.feasibility(p, profile))
        .collect();
    let feasibility = seconds_since(check);
    let solutions = positions
        .into_iter()
        .zip(profiles)
        .zip(reports)
        .map(|((position, profile), report)| Solution {
            position,
            evaluation: Evaluation {
                objectives: profile.objectives,
                feasibility: report,
            },
        })
        .collect();
    (solutions, feasibility)
}

fn rank_and_crowd(population: &[Solution]) -> (Vec<usize>, Vec<f64>) {
    let evaluations: Vec<Evaluation> = population.iter().map(|s| s.evaluation).collect();
    let mut rank = vec![0; population.len()];
    let mut crowding = vec![0.0; population.len()];
    for (r, front) in fast_nondominated_sort(&evaluations).into_iter().enumerate() {
        let members: Vec<Evaluation> = front.iter().map(|&i| evaluations[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    (rank, crowding)
}

/// Elitist truncation: whole fronts while they fit, then the least crowded
/// members of the splitting front.
fn survivors(combined: Vec<Solution>, size: usize) -> Vec<Solution> {
    let evaluations: Vec<Evaluation> = combined.iter().map(|s| s.evaluation).collect();
    let mut keep: Vec<usize> = Vec::with_capacity(size);
    for front in fast_nondominated_sort(&evaluations) {
        if keep.len() + front.len() <= size {
            keep.extend(front);
            continue;
        }
        let members: Vec<Evaluation> = front.iter().map(|&i| evaluations[i]).collect();
        let distance = crowding_distance(&members);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| distance[b].total_cmp(&distance[a]).then(a.cmp(&b)));
        keep.extend(order.into_iter().take(size - keep.len()).map(|k| front[k]));
        break;
    }
    keep.sort_unstable();
    let mut slots: Vec<Option<Solution>> = combined.into_iter().map(Some).collect();
    keep.into_iter().map(|i| slots[i].take().expect("kept once")).collect()
}
