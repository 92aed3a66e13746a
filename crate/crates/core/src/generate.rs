//! Seeded random scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CapabilityKind, CapabilityVector, LocationalConstraint, Point, Robot, RobotState, Scenario,
    SubTask, Task, Thresholds,
};

/// Sampling ranges for [`generate_scenario`]. All intervals are inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRanges {
    pub sensing_kinds: usize,
    pub actuating_kinds: usize,
    /// Each robot owns an integer quantity in `0..=capability_max` of every kind.
    pub capability_max: u32,
    pub battery: (f64, f64),
    pub speed: (f64, f64),
    pub deploy_cost: (f64, f64),
    /// Robots and target are placed uniformly in `[0, area]^2`.
    pub area: f64,
    pub subtasks: usize,
    /// Per sub-task, per kind: an integer in `0..=subtask_requirement_max`.
    /// Every kind ends up with a task total of at least one unit.
    pub subtask_requirement_max: u32,
    /// Adds `s_i = a_i` for every `i < min(sensing_kinds, actuating_kinds)`.
    pub paired_constraints: bool,
}

impl Default for GenerationRanges {
    fn default() -> Self {
        Self {
            sensing_kinds: 3,
            actuating_kinds: 3,
            capability_max: 3,
            battery: (0.0, 100.0),
            speed: (1.0, 10.0),
            deploy_cost: (1.0, 100.0),
            area: 1000.0,
            subtasks: 3,
            subtask_requirement_max: 2,
            paired_constraints: true,
        }
    }
}

impl GenerationRanges {
    fn validate(&self) -> Result<()> {
        let interval = |name: &str, (lo, hi): (f64, f64), min: f64| {
            if lo.is_finite() && hi.is_finite() && min <= lo && lo <= hi {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} range ({lo}, {hi}) is invalid")))
            }
        };
        interval("battery", self.battery, 0.0)?;
        if self.battery.1 > 100.0 {
            return Err(Error::invalid("battery range must lie within [0, 100]"));
        }
        interval("speed", self.speed, f64::MIN_POSITIVE)?;
        interval("deploy_cost", self.deploy_cost, 0.0)?;
        if !(self.area.is_finite() && self.area > 0.0) {
            return Err(Error::invalid("area must be positive"));
        }
        if self.subtasks == 0 {
            return Err(Error::invalid("at least one sub-task is required"));
        }
        if self.sensing_kinds + self.actuating_kinds == 0 {
            return Err(Error::invalid("at least one capability kind is required"));
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn quantities(rng: &mut ChaCha8Rng, len: usize, max: u32) -> CapabilityVector {
    let entries = (0..len).map(|_| f64::from(rng.random_range(0..=max))).collect();
    CapabilityVector::new(entries).expect("sampled quantities are non-negative")
}

/// A deterministic scenario of `n` idle robots and one task.
pub fn generate_scenario(seed: u64, n: usize, ranges: &GenerationRanges) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::invalid("a scenario needs at least one robot"));
    }
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, d) = (ranges.sensing_kinds, ranges.actuating_kinds);

    let target = Point::new(
        uniform(&mut rng, (0.0, ranges.area)),
        uniform(&mut rng, (0.0, ranges.area)),
    );

    let mut robots = Vec::with_capacity(n);
    for id in 0..n {
        let sensing = quantities(&mut rng, r, ranges.capability_max);
        let actuating = quantities(&mut rng, d, ranges.capability_max);
        let position = Point::new(
            uniform(&mut rng, (0.0, ranges.area)),
            uniform(&mut rng, (0.0, ranges.area)),
        );
        robots.push(Robot {
            id,
            sensing,
            actuating,
            position,
            speed: uniform(&mut rng, ranges.speed),
            deploy_cost: uniform(&mut rng, ranges.deploy_cost),
            battery: uniform(&mut rng, ranges.battery),
            state: RobotState::Idle,
        });
    }

    let mut subtasks: Vec<SubTask> = (0..ranges.subtasks)
        .map(|_| SubTask {
            sensing_req: quantities(&mut rng, r, ranges.subtask_requirement_max),
            actuating_req: quantities(&mut rng, d, ranges.subtask_requirement_max),
            locational_constraints: Vec::new(),
        })
        .collect();
    ensure_every_kind_required(&mut subtasks, &mut rng);

    if ranges.paired_constraints {
        for i in 0..r.min(d) {
            let constraint =
                LocationalConstraint::same(CapabilityKind::Sensing(i), CapabilityKind::Actuating(i));
            subtasks[i % ranges.subtasks]
                .locational_constraints
                .push(constraint);
        }
    }

    Scenario::new(
        seed,
        target,
        robots,
        Task {
            subtasks,
            thresholds: Thresholds::default(),
        },
    )
}

/// Bumps one sub-task entry to a single unit for every kind whose task total is zero.
fn ensure_every_kind_required(subtasks: &mut [SubTask], rng: &mut ChaCha8Rng) {
    let r = subtasks[0].sensing_req.len();
    let d = subtasks[0].actuating_req.len();
    for kind in (0..r).map(CapabilityKind::Sensing).chain((0..d).map(CapabilityKind::Actuating)) {
        let pick = |z: &SubTask| match kind {
            CapabilityKind::Sensing(i) => z.sensing_req.entries()[i],
            CapabilityKind::Actuating(j) => z.actuating_req.entries()[j],
        };
        if subtasks.iter().map(pick).sum::<f64>() > 0.0 {
            continue;
        }
        let k = rng.random_range(0..subtasks.len());
        let z = &mut subtasks[k];
        let (vector, index) = match kind {
            CapabilityKind::Sensing(i) => (&mut z.sensing_req, i),
            CapabilityKind::Actuating(j) => (&mut z.actuating_req, j),
        };
        let mut entries = vector.entries().to_vec();
        entries[index] = 1.0;
        *vector = CapabilityVector::new(entries).expect("non-negative");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_inputs_same_scenario() {
        let ranges = GenerationRanges::default();
        assert_eq!(
            generate_scenario(7, 25, &ranges).unwrap(),
            generate_scenario(7, 25, &ranges).unwrap()
        );
        assert_ne!(
            generate_scenario(7, 25, &ranges).unwrap(),
            generate_scenario(8, 25, &ranges).unwrap()
        );
    }

    #[test]
    fn ids_dense_and_idle() {
        let s = generate_scenario(1, 10, &GenerationRanges::default()).unwrap();
        assert_eq!(s.robots.iter().map(|r| r.id).collect::<Vec<_>>(), (0..10).collect::<Vec<_>>());
        assert!(s.robots.iter().all(|r| r.state == RobotState::Idle));
    }

    #[test]
    fn default_ranges_give_six_required_kinds_and_three_pairs() {
        for seed in 0..20 {
            let s = generate_scenario(seed, 10, &GenerationRanges::default()).unwrap();
            for r in &s.robots {
                assert_eq!(r.sensing.len() + r.actuating.len(), 6);
                assert!(r.sensing.entries().iter().all(|v| (0.0..=3.0).contains(v) && v.fract() == 0.0));
                assert!((1.0..=10.0).contains(&r.speed));
                assert!((0.0..=100.0).contains(&r.battery));
            }
            let req = s.task.sensing_requirement();
            let act = s.task.actuating_requirement();
            assert!(req.entries().iter().chain(act.entries()).all(|v| *v >= 1.0));
            assert_eq!(s.task.subtasks.len(), 3);
            assert_eq!(s.task.constraints().count(), 3);
        }
    }

    #[test]
    fn zero_robots_is_invalid() {
        assert!(matches!(
            generate_scenario(0, 0, &GenerationRanges::default()),
            Err(Error::InvalidInput(_))
        ));
    }
}
