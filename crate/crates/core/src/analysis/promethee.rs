//! Promethee II complete ranking with the usual (step) preference function.
//!
//! For alternatives `a`, `b` and minimized criterion `c`, `a` is preferred
//! on `c` exactly when `f_c(a) < f_c(b)`. The aggregated preference is
//! `pi(a, b) = sum_c w_c * [f_c(a) < f_c(b)]` and the net flow
//! `phi(a) = (sum_b pi(a, b) - sum_b pi(b, a)) / (k - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;

/// Relative importance of (time, cost, size); non-negative, summing to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaWeights {
    pub time: f64,
    pub cost: f64,
    pub size: f64,
}

impl Default for CriteriaWeights {
    /// Time first, the remaining weight split evenly.
    fn default() -> Self {
        Self {
            time: 0.5,
            cost: 0.25,
            size: 0.25,
        }
    }
}

impl CriteriaWeights {
    pub fn new(time: f64, cost: f64, size: f64) -> Result<Self> {
        let w = Self { time, cost, size };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.as_array();
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "criteria weights must be non-negative and sum to 1, got {w:?}"
            )));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.time, self.cost, self.size]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Alternative indices, best first; equal flows keep input order.
    pub order: Vec<usize>,
    /// Net flow per alternative, in input order.
    pub net_flows: Vec<f64>,
}

impl Ranking {
    pub fn best(&self) -> usize {
        self.order[0]
    }
}

/// Net flows via per-criterion sorting: on criterion `c` the positive flow
/// of `a` counts the alternatives strictly worse than `a`, the negative flow
/// those strictly better, so `k` alternatives rank in `O(k log k)`.
pub fn promethee_rank(alternatives: &[ObjectiveVector], weights: &CriteriaWeights) -> Result<Ranking> {
    weights.validate()?;
    let k = alternatives.len();
    if k == 0 {
        return Err(Error::undefined("cannot rank an empty set of alternatives"));
    }
    let values: Vec<[f64; 3]> = alternatives.iter().map(ObjectiveVector::as_array).collect();
    if values.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::invalid("objective values must not be NaN"));
    }
    let mut net = vec![0.0; k];
    if k > 1 {
        for (c, w) in weights.as_array().into_iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut sorted: Vec<f64> = values.iter().map(|v| v[c]).collect();
            sorted.sort_by(f64::total_cmp);
            for (a, v) in values.iter().enumerate() {
                let better = sorted.partition_point(|x| *x < v[c]);
                let worse = k - sorted.partition_point(|x| *x <= v[c]);
                net[a] += w * (worse as f64 - better as f64);
            }
        }
        for phi in &mut net {
            *phi /= (k - 1) as f64;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| net[b].total_cmp(&net[a]).then(a.cmp(&b)));
    Ok(Ranking {
        order,
        net_flows: net,
    })
}
