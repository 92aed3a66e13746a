//! Quantum particles: per-bit velocities in `[0, 1]` and sampled positions.

use rand::distr::Open01;
use rand::Rng;

use super::{InclusionRule, QmopsoParams};
use crate::model::Coalition;
use crate::objectives::{beats, Evaluate, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub velocity: Vec<f64>,
    pub current: Solution,
    pub local_best: Solution,
}

impl Particle {
    /// Replaces the memory unless it beats the current position.
    pub fn update_local_best(&mut self) {
        if !beats(&self.local_best.evaluation, &self.current.evaluation) {
            self.local_best = self.current.clone();
        }
    }
}

/// Draws one position: bit `j` is set according to `rule`, comparing a fresh
/// uniform draw in `(0, 1)` with `velocity[j]`.
pub fn sample_position<R: Rng + ?Sized>(velocity: &[f64], rule: InclusionRule, rng: &mut R) -> Coalition {
    Coalition::from_bits(
        velocity
            .iter()
            .map(|&v| {
                let draw: f64 = rng.sample(Open01);
                match rule {
                    InclusionRule::DrawAboveVelocity => draw > v,
                    InclusionRule::DrawBelowVelocity => draw < v,
                }
            })
            .collect(),
    )
}

/// `w*v + c1*(alpha*lb + beta*(1-lb)) + c2*(alpha*gb + beta*(1-gb))` per bit.
pub fn update_velocity(velocity: &[f64], local_best: &Coalition, global_best: &Coalition, params: &QmopsoParams) -> Vec<f64> {
    let pull = |bit: bool, c: f64| c * if bit { params.alpha } else { params.beta };
    velocity
        .iter()
        .zip(local_best.bits())
        .zip(global_best.bits())
        .map(|((&v, &lb), &gb)| params.inertia * v + pull(lb, params.cognitive) + pull(gb, params.social))
        .collect()
}

/// `population` particles with uniform velocities, each remembering its
/// initial position.
pub fn init_swarm<R: Rng + ?Sized>(params: &QmopsoParams, evaluator: &impl Evaluate, rng: &mut R) -> Vec<Particle> {
    let n = evaluator.robots();
    (0..params.population)
        .map(|_| {
            let velocity: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let position = sample_position(&velocity, params.inclusion, rng);
            let current = Solution::evaluate(position, evaluator);
            Particle {
                velocity,
                local_best: current.clone(),
                current,
            }
        })
        .collect()
}
