//! Front quality indicators: error ratio, set coverage and spacing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Coalition;
use crate::objectives::{dominates, Evaluation, ObjectiveVector, Solution};

/// Objective vectors closer than this are the same point.
pub const OBJECTIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub coalition: Coalition,
    pub objectives: ObjectiveVector,
}

/// A set of mutually non-dominated solutions, one per distinct objective vector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Front {
    pub points: Vec<FrontPoint>,
}

impl Front {
    /// Keeps the non-dominated points; of points sharing an objective vector
    /// the first one stays.
    pub fn from_points(points: impl IntoIterator<Item = FrontPoint>) -> Front {
        let mut kept: Vec<FrontPoint> = Vec::new();
        for p in points {
            if kept.iter().any(|q| {
                dominates(&q.objectives, &p.objectives)
                    || q.objectives.approx_eq(&p.objectives, OBJECTIVE_TOLERANCE)
            }) {
                continue;
            }
            kept.retain(|q| !dominates(&p.objectives, &q.objectives));
            kept.push(p);
        }
        Front { points: kept }
    }

    /// The feasible, non-empty solutions of an optimizer's output.
    pub fn feasible<'a>(solutions: impl IntoIterator<Item = (&'a Coalition, &'a Evaluation)>) -> Front {
        Front::from_points(
            solutions
                .into_iter()
                .filter(|(c, e)| e.is_feasible() && c.has_members())
                .map(|(c, e)| FrontPoint {
                    coalition: c.clone(),
                    objectives: e.objectives,
                }),
        )
    }

    pub fn from_solutions<'a>(solutions: impl IntoIterator<Item = &'a Solution>) -> Front {
        Front::feasible(solutions.into_iter().map(|s| (&s.position, &s.evaluation)))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.points.iter().map(|p| &p.objectives)
    }

    pub fn contains_objectives(&self, o: &ObjectiveVector) -> bool {
        self.objectives().any(|q| q.approx_eq(o, OBJECTIVE_TOLERANCE))
    }
}

/// Fraction of `front` whose objective vectors are absent from `reference`.
pub fn error_ratio(front: &Front, reference: &Front) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::undefined("error ratio of an empty front"));
    }
    if reference.is_empty() {
        return Err(Error::undefined("error ratio against an empty reference"));
    }
    let missing = front
        .objectives()
        .filter(|o| !reference.contains_objectives(o))
        .count();
    Ok(missing as f64 / front.len() as f64)
}

/// `SC(a, b)`: fraction of `b` weakly dominated by some point of `a`.
pub fn set_coverage(a: &Front, b: &Front) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::undefined("set coverage of an empty front"));
    }
    let covered = b
        .objectives()
        .filter(|q| a.objectives().any(|p| p.weakly_dominates(q)))
        .count();
    Ok(covered as f64 / b.len() as f64)
}

/// Population standard deviation of each point's Euclidean distance to its
/// nearest neighbour, on raw objective values.
pub fn spacing(front: &Front) -> Result<f64> {
    spacing_of(&front.objectives().map(ObjectiveVector::as_array).collect::<Vec<_>>())
}

pub(crate) fn spacing_of(points: &[[f64; 3]]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::undefined("spacing needs at least two points"));
    }
    let nearest: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| euclidean(&points[i], &points[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = nearest.iter().sum::<f64>() / n as f64;
    let var = nearest.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
    Ok(var.sqrt())
}

fn euclidean(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Non-dominated union of several fronts, duplicates collapsed.
pub fn reference_front<'a>(fronts: impl IntoIterator<Item = &'a Front>) -> Result<Front> {
    let merged = Front::from_points(fronts.into_iter().flat_map(|f| f.points.iter().cloned()));
    if merged.is_empty() {
        return Err(Error::undefined("every front is empty"));
    }
    Ok(merged)
}
