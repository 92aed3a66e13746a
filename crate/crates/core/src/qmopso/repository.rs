//! The external archive of mutually non-dominated positions.

use crate::analysis::metrics::Front;
use crate::analysis::promethee::{promethee_rank, CriteriaWeights};
use crate::error::{Error, Result};
use crate::objectives::{beats, Solution};

/// Unbounded archive; no entry beats another under the constrained rule,
/// and each position is stored once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Repository {
    entries: Vec<Solution>,
}

impl Repository {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Solution] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Solution> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `candidate` unless its position is already stored or an entry
    /// beats it; entries it beats are evicted. Returns whether it was added.
    pub fn insert(&mut self, candidate: Solution) -> bool {
        if self.entries.iter().any(|e| {
            e.position == candidate.position || beats(&e.evaluation, &candidate.evaluation)
        }) {
            return false;
        }
        self.entries.retain(|e| !beats(&candidate.evaluation, &e.evaluation));
        self.entries.push(candidate);
        true
    }

    pub fn update(&mut self, candidates: impl IntoIterator<Item = Solution>) {
        for c in candidates {
            self.insert(c);
        }
    }

    /// Index of the Promethee II top-ranked entry.
    pub fn select_global_best(&self, weights: &CriteriaWeights) -> Result<usize> {
        if self.entries.is_empty() {
            return Err(Error::Internal("global best requested from an empty repository".into()));
        }
        let objectives: Vec<_> = self.entries.iter().map(|e| e.evaluation.objectives).collect();
        Ok(promethee_rank(&objectives, weights)?.best())
    }

    /// The feasible, non-empty entries as a front.
    pub fn front(&self) -> Front {
        Front::from_solutions(&self.entries)
    }
}
