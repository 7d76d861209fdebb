use std::cmp::Ordering;

use super::objective::Objective;
use super::tie::{argmax_by, cmp_values};
use super::SolverConfig;
use crate::error::Result;
use crate::graph::{ProblemInstance, Solution, TraceEntry, TraceStatus};

/// Output of the cost-ratio greedy loop.
pub(crate) struct Completion {
    pub chosen: Vec<usize>,
    pub trace: Vec<TraceEntry>,
}

/// `true` if `(gain_a, cost_a)` ranks strictly above `(gain_b, cost_b)`.
/// Free edges rank above every priced edge and among themselves by gain;
/// priced edges rank by gain per unit cost.
fn ranks_above(a: (f64, f64), b: (f64, f64), eps: f64) -> bool {
    match (a.1 == 0.0, b.1 == 0.0) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => cmp_values(a.0, b.0, eps) == Ordering::Greater,
        (false, false) => cmp_values(a.0 / a.1, b.0 / b.1, eps) == Ordering::Greater,
    }
}

/// Grows `start` with the cost-ratio greedy over `pool` (ascending candidate
/// indices). The top-ranked edge is added if it fits the budget and discarded
/// otherwise; either way it leaves the pool. Edges with zero marginal gain are
/// discarded too, since they can only consume budget.
///
/// Gains are recomputed only after an acceptance: a rejection leaves `S`, and
/// so every remaining gain, unchanged. In estimate mode the `j`-th evaluation
/// uses coin block `base_seed + j`.
pub(crate) fn complete(
    inst: &ProblemInstance,
    obj: &mut Objective<'_>,
    cfg: &SolverConfig,
    start: Vec<usize>,
    mut pool: Vec<usize>,
    first_step: usize,
) -> Result<Completion> {
    let eps = obj.eps();
    let budget = inst.budget();
    let cands = inst.candidates();
    let mut chosen = start;
    let mut spent = inst.cost_of(&chosen);
    let mut trace = Vec::new();
    let mut round = 0u64;

    'outer: while !pool.is_empty() {
        round += 1;
        let eval = obj.evaluate(&chosen, &pool, obj.block(round))?;
        let mut live: Vec<usize> = (0..pool.len()).collect();
        loop {
            let Some(pick) = argmax_best(&live, |p| (eval.gains[p], cands[pool[p]].cost), eps) else {
                pool.clear();
                break 'outer;
            };
            let pos = live.remove(pick);
            let cand = pool[pos];
            let gain = eval.gains[pos];
            let cost = cands[cand].cost;
            let step = first_step + trace.len() + 1;
            let entry = |sigma, status| TraceEntry {
                step,
                candidate: cand,
                edge: cands[cand],
                gain: Some(gain),
                sigma,
                status,
            };

            if gain <= eps {
                if cost > 0.0 || cfg.stop_on_zero_gain {
                    // Every remaining edge has zero gain as well.
                    break 'outer;
                }
                trace.push(entry(eval.base, TraceStatus::Rejected));
                continue;
            }
            if spent + cost <= budget {
                spent += cost;
                chosen.push(cand);
                trace.push(entry(eval.with[pos], TraceStatus::Accepted));
                let keep: Vec<usize> = live.iter().map(|&p| pool[p]).collect();
                pool = keep;
                continue 'outer;
            }
            trace.push(entry(eval.base, TraceStatus::Rejected));
        }
    }
    Ok(Completion { chosen, trace })
}

fn argmax_best(live: &[usize], key: impl Fn(usize) -> (f64, f64), eps: f64) -> Option<usize> {
    let mut best: Option<(usize, (f64, f64))> = None;
    for (i, &p) in live.iter().enumerate() {
        let k = key(p);
        match best {
            Some((_, bk)) if !ranks_above(k, bk, eps) => {}
            _ => best = Some((i, k)),
        }
    }
    best.map(|(i, _)| i)
}

/// Budgeted greedy: the cost-ratio greedy set, or the best affordable single
/// edge if that spreads further.
///
/// The single-edge fallback only considers edges whose cost fits the budget.
/// In estimate mode the single edge is chosen with coin block `base_seed` and
/// both final candidates are compared on that same block.
pub fn cost_greedy(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<Solution> {
    let mut obj = Objective::new(inst, cfg);
    let eps = obj.eps();
    let block0 = obj.block(0);
    let all: Vec<usize> = (0..inst.candidates().len()).collect();

    let affordable: Vec<usize> = all.iter().copied().filter(|&i| inst.candidates()[i].cost <= inst.budget()).collect();
    let best_single = if affordable.is_empty() {
        None
    } else {
        let eval = obj.evaluate(&[], &affordable, block0)?;
        argmax_by(&eval.with, eps, |v| *v).map(|i| affordable[i])
    };

    let Completion { chosen, mut trace } = complete(inst, &mut obj, cfg, Vec::new(), all, 0)?;
    let greedy_sigma = obj.sigma(&chosen, block0)?;

    if let Some(single) = best_single {
        if chosen != [single] {
            let single_sigma = obj.sigma(&[single], block0)?;
            if cmp_values(single_sigma, greedy_sigma, eps) == Ordering::Greater {
                trace.push(TraceEntry {
                    step: trace.len() + 1,
                    candidate: single,
                    edge: inst.candidates()[single],
                    gain: None,
                    sigma: single_sigma,
                    status: TraceStatus::Fallback,
                });
                return Ok(Solution::from_indices(inst, vec![single], single_sigma, trace));
            }
        }
    }
    Ok(Solution::from_indices(inst, chosen, greedy_sigma, trace))
}
