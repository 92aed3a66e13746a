//! Wall-clock accounting shared by every optimizer.

use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Seconds spent in each phase of one run.
///
/// `repository_update[t]` covers generation `t`'s bookkeeping after the new
/// positions exist: evaluating them (objectives and constraint handling),
/// updating memories and merging into the archive. `feasibility_check[t]` is
/// the constraint-handling share of that same interval.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingBreakdown {
    /// Processing time, including `filtering` when the run filtered robots.
    pub total: f64,
    pub filtering: f64,
    pub repository_update: Vec<f64>,
    pub feasibility_check: Vec<f64>,
}

impl TimingBreakdown {
    pub fn repository_update_total(&self) -> f64 {
        self.repository_update.iter().sum()
    }

    pub fn feasibility_check_total(&self) -> f64 {
        self.feasibility_check.iter().sum()
    }

    /// Mean per-iteration repository update time; 0 when no iteration ran.
    pub fn mean_repository_update(&self) -> f64 {
        mean(&self.repository_update)
    }

    pub fn mean_feasibility_check(&self) -> f64 {
        mean(&self.feasibility_check)
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub(crate) fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}
