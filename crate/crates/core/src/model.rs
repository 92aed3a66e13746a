//! Robots, tasks, coalitions and scenarios.
//!
//! A robot carries two capability vectors: sensing quantities (`s1..sr`) and
//! actuating quantities (`a1..ad`). A task is a list of sub-tasks; its
//! requirement is the element-wise sum of the sub-task requirements. A
//! coalition is a membership bit-vector over the robots of one scenario.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Non-negative capability quantities, one entry per capability kind.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CapabilityVector(Vec<f64>);

impl CapabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!(
                "capability quantities must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0.0)
    }

    /// Element-wise `self >= requirement`.
    pub fn covers(&self, requirement: &CapabilityVector) -> bool {
        self.0.len() == requirement.0.len()
            && self.0.iter().zip(&requirement.0).all(|(have, need)| have >= need)
    }

    fn add_assign(&mut self, other: &CapabilityVector) {
        for (acc, v) in self.0.iter_mut().zip(&other.0) {
            *acc += v;
        }
    }
}

impl TryFrom<Vec<f64>> for CapabilityVector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<CapabilityVector> for Vec<f64> {
    fn from(v: CapabilityVector) -> Self {
        v.0
    }
}

/// One sensing or actuating capability kind. Displayed 1-based: `s1`, `a3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CapabilityKind {
    Sensing(usize),
    Actuating(usize),
}

impl CapabilityKind {
    /// Position in the concatenated `[sensing.., actuating..]` layout.
    pub fn flat_index(self, sensing_width: usize) -> usize {
        match self {
            CapabilityKind::Sensing(i) => i,
            CapabilityKind::Actuating(j) => sensing_width + j,
        }
    }

    pub fn fits(self, sensing_width: usize, actuating_width: usize) -> bool {
        match self {
            CapabilityKind::Sensing(i) => i < sensing_width,
            CapabilityKind::Actuating(j) => j < actuating_width,
        }
    }

    /// The quantity of this kind a robot owns.
    pub fn quantity(self, robot: &Robot) -> f64 {
        match self {
            CapabilityKind::Sensing(i) => robot.sensing.entries()[i],
            CapabilityKind::Actuating(j) => robot.actuating.entries()[j],
        }
    }
}

impl fmt::Display for CapabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapabilityKind::Sensing(i) => write!(f, "s{}", i + 1),
            CapabilityKind::Actuating(j) => write!(f, "a{}", j + 1),
        }
    }
}

impl FromStr for CapabilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("capability kind must look like s1 or a2, got {s:?}"));
        let (head, digits) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let index: usize = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        match head {
            "s" => Ok(CapabilityKind::Sensing(index - 1)),
            "a" => Ok(CapabilityKind::Actuating(index - 1)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for CapabilityKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CapabilityKind> for String {
    fn from(k: CapabilityKind) -> Self {
        k.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RobotState {
    #[default]
    Idle,
    /// Locked while an optimizer run is considering the robot.
    Allocated,
    Busy,
}

impl RobotState {
    /// Idle -> Allocated -> Busy -> Idle. An allocated robot that is not
    /// selected is released back to Idle.
    pub fn can_become(self, next: RobotState) -> bool {
        use RobotState::*;
        matches!(
            (self, next),
            (Idle, Allocated) | (Allocated, Busy) | (Allocated, Idle) | (Busy, Idle)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Robot {
    pub id: usize,
    pub sensing: CapabilityVector,
    pub actuating: CapabilityVector,
    pub position: Point,
    pub speed: f64,
    pub deploy_cost: f64,
    /// Percent, 0..=100.
    pub battery: f64,
    #[serde(default)]
    pub state: RobotState,
}

impl Robot {
    pub fn travel_time(&self, target: &Point) -> f64 {
        self.position.distance(target) / self.speed
    }

    pub fn transition(&mut self, next: RobotState) -> Result<()> {
        if !self.state.can_become(next) {
            return Err(Error::StateTransition {
                robot: self.id,
                from: self.state,
                to: next,
            });
        }
        self.state = next;
        Ok(())
    }

    fn validate(&self, sensing_width: usize, actuating_width: usize) -> Result<()> {
        let fail = |what: &str| Err(Error::invalid(format!("robot {}: {what}", self.id)));
        if self.sensing.len() != sensing_width || self.actuating.len() != actuating_width {
            return fail("capability vector width differs from the scenario's");
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return fail("speed must be positive");
        }
        if !(self.deploy_cost.is_finite() && self.deploy_cost >= 0.0) {
            return fail("deployment cost must be non-negative");
        }
        if !(0.0..=100.0).contains(&self.battery) {
            return fail("battery must lie in [0, 100]");
        }
        if !(self.position.x.is_finite() && self.position.y.is_finite()) {
            return fail("position must be finite");
        }
        Ok(())
    }
}

/// `x_i = x_j` or `x_i != x_j` over robot-valued CSP variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    SameRobot,
    DifferentRobot,
}

impl Relation {
    pub fn holds(self, left: usize, right: usize) -> bool {
        match self {
            Relation::SameRobot => left == right,
            Relation::DifferentRobot => left != right,
        }
    }
}

/// Two required capability kinds that must reside on the same robot, or on
/// different robots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocationalConstraint {
    pub relation: Relation,
    pub left: CapabilityKind,
    pub right: CapabilityKind,
}

impl LocationalConstraint {
    pub fn same(left: CapabilityKind, right: CapabilityKind) -> Self {
        Self {
            relation: Relation::SameRobot,
            left,
            right,
        }
    }

    pub fn different(left: CapabilityKind, right: CapabilityKind) -> Self {
        Self {
            relation: Relation::DifferentRobot,
            left,
            right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubTask {
    pub sensing_req: CapabilityVector,
    pub actuating_req: CapabilityVector,
    #[serde(default)]
    pub locational_constraints: Vec<LocationalConstraint>,
}

/// Upper bounds a customer places on an acceptable coalition. `None` means
/// unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_robots: Option<usize>,
}

impl Thresholds {
    /// A value exactly at a threshold is within it.
    pub fn admits(&self, time: f64, cost: f64, robots: usize) -> bool {
        self.max_time.is_none_or(|t| time <= t)
            && self.max_cost.is_none_or(|c| cost <= c)
            && self.max_robots.is_none_or(|n| robots <= n)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.max_time.is_some_and(|t| !positive(t))
            || self.max_cost.is_some_and(|c| !positive(c))
            || self.max_robots == Some(0)
        {
            return Err(Error::invalid("thresholds must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub subtasks: Vec<SubTask>,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl Task {
    pub fn sensing_requirement(&self) -> CapabilityVector {
        sum_vectors(self.subtasks.iter().map(|z| &z.sensing_req))
    }

    pub fn actuating_requirement(&self) -> CapabilityVector {
        sum_vectors(self.subtasks.iter().map(|z| &z.actuating_req))
    }

    pub fn constraints(&self) -> impl Iterator<Item = &LocationalConstraint> {
        self.subtasks.iter().flat_map(|z| z.locational_constraints.iter())
    }

    fn validate(&self, sensing_width: usize, actuating_width: usize) -> Result<()> {
        if self.subtasks.is_empty() {
            return Err(Error::invalid("a task needs at least one sub-task"));
        }
        for (k, z) in self.subtasks.iter().enumerate() {
            if z.sensing_req.len() != sensing_width || z.actuating_req.len() != actuating_width {
                return Err(Error::invalid(format!(
                    "sub-task {k}: requirement width differs from the robots' capability width"
                )));
            }
            for c in &z.locational_constraints {
                if c.left == c.right {
                    return Err(Error::invalid(format!(
                        "sub-task {k}: constraint relates {} to itself",
                        c.left
                    )));
                }
                for kind in [c.left, c.right] {
                    if !kind.fits(sensing_width, actuating_width) {
                        return Err(Error::invalid(format!(
                            "sub-task {k}: constraint names unknown capability {kind}"
                        )));
                    }
                }
            }
        }
        self.thresholds.validate()
    }
}

fn sum_vectors<'a>(mut vectors: impl Iterator<Item = &'a CapabilityVector>) -> CapabilityVector {
    let Some(first) = vectors.next() else {
        return CapabilityVector::default();
    };
    let mut total = first.clone();
    for v in vectors {
        total.add_assign(v);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub target: Point,
    pub task: Task,
    pub robots: Vec<Robot>,
}

impl Scenario {
    pub fn new(seed: u64, target: Point, robots: Vec<Robot>, task: Task) -> Result<Self> {
        let scenario = Self {
            seed,
            target,
            task,
            robots,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let (r, d) = (self.sensing_width(), self.actuating_width());
        for (i, robot) in self.robots.iter().enumerate() {
            if robot.id != i {
                return Err(Error::invalid(format!(
                    "robot ids must be dense 0..n in order; position {i} holds id {}",
                    robot.id
                )));
            }
            robot.validate(r, d)?;
        }
        if !(self.target.x.is_finite() && self.target.y.is_finite()) {
            return Err(Error::invalid("target position must be finite"));
        }
        self.task.validate(r, d)
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn sensing_width(&self) -> usize {
        self.task.subtasks.first().map_or(0, |z| z.sensing_req.len())
    }

    pub fn actuating_width(&self) -> usize {
        self.task.subtasks.first().map_or(0, |z| z.actuating_req.len())
    }

    /// A scenario holding only `keep` (original ids, ascending), re-indexed
    /// densely. Returns the scenario and the original id of each new index.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<(Scenario, Vec<usize>)> {
        let mut robots = Vec::with_capacity(keep.len());
        for (new_id, &old_id) in keep.iter().enumerate() {
            let mut robot = self
                .robots
                .get(old_id)
                .ok_or_else(|| Error::invalid(format!("no robot with id {old_id}")))?
                .clone();
            robot.id = new_id;
            robots.push(robot);
        }
        let sub = Scenario {
            seed: self.seed,
            target: self.target,
            task: self.task.clone(),
            robots,
        };
        Ok((sub, keep.to_vec()))
    }
}

/// Membership bit-vector over the robots of one scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "CoalitionRepr", try_from = "CoalitionRepr")]
pub struct Coalition {
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct CoalitionRepr {
    robots: usize,
    members: Vec<usize>,
}

impl From<Coalition> for CoalitionRepr {
    fn from(c: Coalition) -> Self {
        CoalitionRepr {
            robots: c.len(),
            members: c.members().collect(),
        }
    }
}

impl TryFrom<CoalitionRepr> for Coalition {
    type Error = Error;

    fn try_from(repr: CoalitionRepr) -> Result<Self> {
        Coalition::from_members(repr.robots, &repr.members)
    }
}

impl Coalition {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        let mut c = Self::empty(n);
        for &m in members {
            if m >= n {
                return Err(Error::invalid(format!(
                    "member {m} out of range for {n} robots"
                )));
            }
            c.bits[m] = true;
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn size(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn has_members(&self) -> bool {
        self.bits.iter().any(|b| *b)
    }

    pub fn contains(&self, robot: usize) -> bool {
        self.bits.get(robot).copied().unwrap_or(false)
    }

    pub fn set(&mut self, robot: usize, member: bool) {
        self.bits[robot] = member;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !(*a && *b))
    }

    pub(crate) fn check_len(&self, scenario: &Scenario) -> Result<()> {
        if self.len() != scenario.len() {
            return Err(Error::invalid(format!(
                "coalition has {} bits but the scenario has {} robots",
                self.len(),
                scenario.len()
            )));
        }
        Ok(())
    }
}

/// Element-wise sums of the members' sensing and actuating vectors.
pub fn coalition_capabilities(
    coalition: &Coalition,
    scenario: &Scenario,
) -> Result<(CapabilityVector, CapabilityVector)> {
    coalition.check_len(scenario)?;
    let mut sensing = CapabilityVector::zeros(scenario.sensing_width());
    let mut actuating = CapabilityVector::zeros(scenario.actuating_width());
    for i in coalition.members() {
        let robot = &scenario.robots[i];
        sensing.add_assign(&robot.sensing);
        actuating.add_assign(&robot.actuating);
    }
    Ok((sensing, actuating))
}

/// Whether the coalition's summed capabilities cover the task requirement.
///
/// Sensing and actuating requirements must both hold; an all-zero
/// requirement vector is satisfied by anything.
pub fn meets_capability_requirements(coalition: &Coalition, scenario: &Scenario) -> Result<bool> {
    let (sensing, actuating) = coalition_capabilities(coalition, scenario)?;
    let (need_s, need_a) = (
        scenario.task.sensing_requirement(),
        scenario.task.actuating_requirement(),
    );
    Ok((need_s.is_zero() || sensing.covers(&need_s))
        && (need_a.is_zero() || actuating.covers(&need_a)))
}

/// Robots whose battery is at least `threshold` percent, in input order.
pub fn filter_robots(robots: &[Robot], threshold: f64) -> Vec<Robot> {
    robots
        .iter()
        .filter(|r| r.battery >= threshold)
        .cloned()
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn caps(v: &[f64]) -> CapabilityVector {
        CapabilityVector::new(v.to_vec()).unwrap()
    }

    pub fn robot(id: usize, sensing: &[f64], actuating: &[f64]) -> Robot {
        Robot {
            id,
            sensing: caps(sensing),
            actuating: caps(actuating),
            position: Point::new(0.0, 0.0),
            speed: 1.0,
            deploy_cost: 1.0,
            battery: 100.0,
            state: RobotState::Idle,
        }
    }

    pub fn task(sensing: &[f64], actuating: &[f64], constraints: Vec<LocationalConstraint>) -> Task {
        Task {
            subtasks: vec![SubTask {
                sensing_req: caps(sensing),
                actuating_req: caps(actuating),
                locational_constraints: constraints,
            }],
            thresholds: Thresholds::default(),
        }
    }

    pub fn scenario(robots: Vec<Robot>, task: Task) -> Scenario {
        Scenario::new(0, Point::new(0.0, 0.0), robots, task).unwrap()
    }
}
