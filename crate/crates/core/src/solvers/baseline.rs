use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::objective::Objective;
use super::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, Solution, TraceEntry, TraceStatus};

/// Myopic comparators that fill the budget in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Uniformly shuffled candidate order.
    Random,
    /// Highest propagation probability first.
    MaxProb,
    /// Target with the most out-edges first.
    HighOutdegreeTarget,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::Random => "random",
            Baseline::MaxProb => "max_prob",
            Baseline::HighOutdegreeTarget => "high_outdegree_target",
        }
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "random" => Ok(Baseline::Random),
            "max_prob" => Ok(Baseline::MaxProb),
            "high_outdegree_target" => Ok(Baseline::HighOutdegreeTarget),
            _ => Err(Error::UnknownStrategy(s.to_string())),
        }
    }
}

/// Walks the candidates in the strategy's order, adding each one that still
/// fits the budget. Ties in the ordering keep candidate index order.
pub fn baseline(inst: &ProblemInstance, strategy: Baseline, rng_seed: u64, cfg: &SolverConfig) -> Result<Solution> {
    let cands = inst.candidates();
    let mut order: Vec<usize> = (0..cands.len()).collect();
    match strategy {
        Baseline::Random => order.shuffle(&mut ChaCha8Rng::seed_from_u64(rng_seed)),
        Baseline::MaxProb => order.sort_by(|&a, &b| cands[b].prob.total_cmp(&cands[a].prob)),
        Baseline::HighOutdegreeTarget => order.sort_by_key(|&i| std::cmp::Reverse(inst.out_degree(cands[i].dst))),
    }

    let mut obj = Objective::new(inst, cfg);
    let mut chosen = Vec::new();
    let mut spent = 0.0;
    let mut statuses = Vec::with_capacity(order.len());
    for &i in &order {
        if spent + cands[i].cost <= inst.budget() {
            spent += cands[i].cost;
            chosen.push(i);
            statuses.push((i, TraceStatus::Accepted));
        } else {
            statuses.push((i, TraceStatus::Rejected));
        }
    }
    let sigma = obj.sigma(&chosen, obj.block(0))?;
    let trace = statuses
        .into_iter()
        .enumerate()
        .map(|(k, (i, status))| TraceEntry { step: k + 1, candidate: i, edge: cands[i], gain: None, sigma, status })
        .collect();
    Ok(Solution::from_indices(inst, chosen, sigma, trace))
}
