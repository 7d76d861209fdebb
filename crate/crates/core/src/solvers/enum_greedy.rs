use std::cmp::Ordering;

use super::cost_greedy::{complete, Completion};
use super::objective::Objective;
use super::tie::{cmp_values, lex_less};
use super::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{ProblemInstance, Solution, TraceEntry, TraceStatus};

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Enumeration greedy.
///
/// `S₁` is the best feasible set with fewer than `M` edges. Every feasible
/// `M`-set is completed by the cost-ratio greedy over the remaining
/// candidates with the remaining budget, and `S₂` is the best completion.
/// Returns the better of the two (`S₁` on ties).
///
/// Fails up front if `Σ_{s ≤ M} C(|candidates|, s)` exceeds the iteration cap.
pub fn enum_greedy(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<Solution> {
    let m = cfg.enum_size;
    if m == 0 {
        return Err(Error::Config("enumeration size M must be at least 1".into()));
    }
    let c = inst.candidates().len();
    let needed: u128 = (0..=m).map(|s| binomial(c, s)).fold(0u128, u128::saturating_add);
    if needed > u128::from(cfg.iteration_cap) {
        return Err(Error::IterationCap { needed, cap: cfg.iteration_cap });
    }

    let mut obj = Objective::new(inst, cfg);
    let eps = obj.eps();
    let block0 = obj.block(0);
    let budget = inst.budget();

    let mut best_small: (f64, Vec<usize>) = (obj.sigma(&[], block0)?, Vec::new());
    for size in 1..m {
        for set in Combinations::new(c, size) {
            if inst.cost_of(&set) > budget {
                continue;
            }
            let v = obj.sigma(&set, block0)?;
            let better = match cmp_values(v, best_small.0, eps) {
                Ordering::Greater => true,
                Ordering::Equal => lex_less(&set, &best_small.1),
                Ordering::Less => false,
            };
            if better {
                best_small = (v, set);
            }
        }
    }

    let mut best_full: Option<(f64, Vec<usize>, Completion)> = None;
    for start in Combinations::new(c, m) {
        if inst.cost_of(&start) > budget {
            continue;
        }
        let pool: Vec<usize> = (0..c).filter(|i| !start.contains(i)).collect();
        let done = complete(inst, &mut obj, cfg, start.clone(), pool, start.len())?;
        let v = obj.sigma(&done.chosen, block0)?;
        if best_full.as_ref().is_none_or(|(bv, _, _)| cmp_values(v, *bv, eps) == Ordering::Greater) {
            best_full = Some((v, start, done));
        }
    }

    if let Some((v, start, done)) = best_full {
        if cmp_values(v, best_small.0, eps) == Ordering::Greater {
            let mut trace: Vec<TraceEntry> = start
                .iter()
                .enumerate()
                .map(|(i, &cand)| TraceEntry {
                    step: i + 1,
                    candidate: cand,
                    edge: inst.candidates()[cand],
                    gain: None,
                    sigma: v,
                    status: TraceStatus::Enumerated,
                })
                .collect();
            trace.extend(done.trace);
            return Ok(Solution::from_indices(inst, done.chosen, v, trace));
        }
    }

    let (v, set) = best_small;
    let trace = set
        .iter()
        .enumerate()
        .map(|(i, &cand)| TraceEntry {
            step: i + 1,
            candidate: cand,
            edge: inst.candidates()[cand],
            gain: None,
            sigma: v,
            status: TraceStatus::Enumerated,
        })
        .collect();
    Ok(Solution::from_indices(inst, set, v, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CandidateEdge, NodeId};
    use crate::oracle::brute_force_opt;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(12, 3), 220);
    }

    fn gadget() -> ProblemInstance {
        ProblemInstance::new(
            4,
            vec![],
            vec![NodeId(0)],
            vec![CandidateEdge::new(0, 1, 1.0, 1.0), CandidateEdge::new(0, 2, 0.9, 0.3)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn gadget_is_solved_optimally() {
        let s = enum_greedy(&gadget(), &SolverConfig::exact()).unwrap();
        assert_eq!(s.chosen_indices, vec![0]);
        assert_eq!(s.sigma, 2.0);
    }

    #[test]
    fn small_pool_matches_brute_force() {
        let inst = gadget();
        let cfg = SolverConfig::exact().with_enum_size(3);
        assert_eq!(enum_greedy(&inst, &cfg).unwrap().index_set(), brute_force_opt(&inst).unwrap().index_set());
    }

    #[test]
    fn cap_is_enforced() {
        let cands = (1..=40).map(|v| CandidateEdge::new(0, v, 0.5, 0.1)).collect();
        let inst = ProblemInstance::new(41, vec![], vec![NodeId(0)], cands, 1.0).unwrap();
        let cfg = SolverConfig { iteration_cap: 1000, ..SolverConfig::exact() };
        assert!(matches!(enum_greedy(&inst, &cfg), Err(Error::IterationCap { .. })));
        assert!(enum_greedy(&inst, &SolverConfig::exact().with_enum_size(0)).is_err());
    }

    #[test]
    fn completion_extends_enumerated_start() {
        // Five cheap edges fit; M = 1 forces the completion branch to do the work.
        let cands = (1..=5).map(|v| CandidateEdge::new(0, v, 1.0, 0.2)).collect();
        let inst = ProblemInstance::new(6, vec![], vec![NodeId(0)], cands, 1.0).unwrap();
        let s = enum_greedy(&inst, &SolverConfig::exact().with_enum_size(1)).unwrap();
        assert_eq!(s.chosen.len(), 5);
        assert_eq!(s.sigma, 6.0);
        assert!(s.total_cost <= inst.budget());
    }
}
