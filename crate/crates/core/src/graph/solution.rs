use serde::{Deserialize, Serialize};

use super::{CandidateEdge, ProblemInstance};

/// What happened to a candidate at one step of a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    /// Added to the solution.
    Accepted,
    /// Picked by the ratio rule but did not fit the remaining budget.
    Rejected,
    /// Part of an enumerated starting subset.
    Enumerated,
    /// The best single edge replaced the greedy set.
    Fallback,
}

impl TraceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceStatus::Accepted => "accepted",
            TraceStatus::Rejected => "rejected",
            TraceStatus::Enumerated => "enumerated",
            TraceStatus::Fallback => "fallback",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub step: usize,
    /// Index into the instance's candidate list.
    pub candidate: usize,
    pub edge: CandidateEdge,
    /// Marginal gain of the candidate at this step, when the solver computed one.
    pub gain: Option<f64>,
    /// Spread of the current solution after this step.
    pub sigma: f64,
    pub status: TraceStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub chosen: Vec<CandidateEdge>,
    /// Candidate indices of `chosen`, same order.
    pub chosen_indices: Vec<usize>,
    pub total_cost: f64,
    pub sigma: f64,
    pub trace: Vec<TraceEntry>,
}

impl Solution {
    /// Builds a solution from candidate indices, in selection order.
    pub fn from_indices(inst: &ProblemInstance, indices: Vec<usize>, sigma: f64, trace: Vec<TraceEntry>) -> Self {
        let chosen = indices.iter().map(|&i| inst.candidates()[i]).collect();
        let total_cost = inst.cost_of(&indices);
        Solution { chosen, chosen_indices: indices, total_cost, sigma, trace }
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// `chosen_indices`, sorted.
    pub fn index_set(&self) -> Vec<usize> {
        let mut v = self.chosen_indices.clone();
        v.sort_unstable();
        v
    }
}
