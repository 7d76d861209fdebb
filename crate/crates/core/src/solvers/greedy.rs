use super::objective::Objective;
use super::tie::argmax_by;
use super::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, Solution, TraceEntry, TraceStatus};

/// Unit-cost greedy: `k` rounds, each adding the remaining candidate that
/// maximizes `σ(A, S ∪ {e})`.
///
/// In estimate mode round `i` (from 1) draws its coins from block
/// `base_seed + i`; the reported spread of the final set uses `base_seed`.
pub fn greedy_ima(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<Solution> {
    if !inst.unit_cost() {
        return Err(Error::NotUnitCost);
    }
    let k = inst.budget() as usize;
    let mut obj = Objective::new(inst, cfg);
    let eps = obj.eps();
    let mut chosen: Vec<usize> = Vec::new();
    let mut pool: Vec<usize> = (0..inst.candidates().len()).collect();
    let mut trace = Vec::new();

    for round in 1..=k.min(pool.len()) {
        let eval = obj.evaluate(&chosen, &pool, obj.block(round as u64))?;
        let best = argmax_by(&eval.with, eps, |v| *v).expect("pool is non-empty");
        let gain = eval.gains[best];
        if cfg.stop_on_zero_gain && gain <= eps {
            break;
        }
        let cand = pool.remove(best);
        chosen.push(cand);
        trace.push(TraceEntry {
            step: round,
            candidate: cand,
            edge: inst.candidates()[cand],
            gain: Some(gain),
            sigma: eval.with[best],
            status: TraceStatus::Accepted,
        });
    }

    let sigma = obj.sigma(&chosen, obj.block(0))?;
    Ok(Solution::from_indices(inst, chosen, sigma, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::SamplingConfig;
    use crate::graph::{CandidateEdge, Edge, NodeId};

    fn star(k: f64) -> ProblemInstance {
        let cands = (1..=4).map(|v| CandidateEdge::new(0, v, 1.0, 1.0)).collect();
        ProblemInstance::new(5, vec![], vec![NodeId(0)], cands, k).unwrap()
    }

    #[test]
    fn zero_budget_is_empty() {
        let s = greedy_ima(&star(0.0), &SolverConfig::exact()).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.sigma, 1.0);
    }

    #[test]
    fn star_of_isolated_targets() {
        let s = greedy_ima(&star(2.0), &SolverConfig::exact()).unwrap();
        assert_eq!(s.chosen_indices, vec![0, 1]);
        assert_eq!(s.sigma, 3.0);
        let est = greedy_ima(&star(2.0), &SolverConfig::estimate(SamplingConfig::new(100, 9))).unwrap();
        assert_eq!(est.chosen_indices, vec![0, 1]);
        assert_eq!(est.sigma, 3.0);
    }

    #[test]
    fn budget_larger_than_pool() {
        let s = greedy_ima(&star(10.0), &SolverConfig::exact()).unwrap();
        assert_eq!(s.chosen.len(), 4);
    }

    #[test]
    fn rejects_general_costs() {
        let inst =
            ProblemInstance::new(2, vec![], vec![NodeId(0)], vec![CandidateEdge::new(0, 1, 1.0, 0.5)], 1.0).unwrap();
        assert!(matches!(greedy_ima(&inst, &SolverConfig::exact()), Err(Error::NotUnitCost)));
    }

    #[test]
    fn picks_by_spread_each_round() {
        // Node 1 reaches 2 and 3 for sure; node 4 is isolated.
        let inst = ProblemInstance::new(
            5,
            vec![Edge::new(1, 2, 1.0), Edge::new(1, 3, 1.0)],
            vec![NodeId(0)],
            vec![
                CandidateEdge::new(0, 2, 1.0, 1.0),
                CandidateEdge::new(0, 1, 0.5, 1.0),
                CandidateEdge::new(0, 4, 1.0, 1.0),
            ],
            3.0,
        )
        .unwrap();
        let s = greedy_ima(&inst, &SolverConfig::exact()).unwrap();
        assert_eq!(s.chosen_indices, vec![1, 2, 0]);
        assert!((s.sigma - 4.0).abs() < 1e-12);
        let stop = greedy_ima(&inst, &SolverConfig::exact().with_stop_on_zero_gain(true)).unwrap();
        assert_eq!(stop.chosen.len(), 3);
        let two = inst.clone().with_budget(2.0).unwrap();
        assert_eq!(greedy_ima(&two, &SolverConfig::exact()).unwrap().chosen_indices, vec![1, 2]);
    }

    #[test]
    fn stop_on_zero_gain_truncates() {
        let inst = ProblemInstance::new(
            3,
            vec![Edge::new(0, 1, 1.0)],
            vec![NodeId(0), NodeId(2)],
            vec![CandidateEdge::new(0, 2, 1.0, 1.0), CandidateEdge::new(2, 1, 1.0, 1.0)],
            2.0,
        )
        .unwrap();
        assert_eq!(greedy_ima(&inst, &SolverConfig::exact()).unwrap().chosen.len(), 2);
        assert!(greedy_ima(&inst, &SolverConfig::exact().with_stop_on_zero_gain(true)).unwrap().is_empty());
    }
}
