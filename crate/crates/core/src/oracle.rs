//! Exact spread by enumerating every live-edge outcome, and exact optima by
//! enumerating every feasible edge set. Only usable on tiny instances; these
//! are the ground truth the solvers and estimators are tested against.
//!
//! Edges with probability 0 are dropped and edges with probability 1 are
//! always live, so only genuinely random edges are enumerated. Edges whose
//! source cannot be reached from the seeds even with every edge live are
//! dropped as well. Outcomes are accumulated in increasing mask order.

use std::cmp::Ordering;

use crate::diffusion::LiveEdgeGraph;
use crate::error::{Error, Result};
use crate::graph::{CandidateEdge, ProblemInstance, Solution, TraceEntry, TraceStatus};
use crate::solvers::tie::{cmp_values, lex_less, EXACT_TIE_EPS};

/// Largest number of random edges `exact_sigma` will enumerate.
pub const MAX_FREE_EDGES: usize = 24;
/// Largest candidate pool `brute_force_opt` will enumerate.
pub const MAX_BRUTE_CANDIDATES: usize = 16;

/// The full distribution over live-edge outcomes of `E ∪ S`. Edges with
/// probability 0 or 1 are fixed; the rest are enumerated.
#[derive(Debug, Clone)]
pub struct ExactDistribution<'a> {
    instance: &'a ProblemInstance,
    added: Vec<CandidateEdge>,
    fixed: Vec<bool>,
    free: Vec<(usize, f64)>,
}

impl<'a> ExactDistribution<'a> {
    pub fn new(instance: &'a ProblemInstance, added: &[CandidateEdge]) -> Result<Self> {
        let probs: Vec<f64> = instance.edges().iter().map(|e| e.prob).chain(added.iter().map(|c| c.prob)).collect();
        let fixed = probs.iter().map(|&p| p >= 1.0).collect();
        let free: Vec<(usize, f64)> =
            probs.iter().enumerate().filter(|(_, &p)| p > 0.0 && p < 1.0).map(|(i, &p)| (i, p)).collect();
        if free.len() > MAX_FREE_EDGES {
            return Err(Error::TooManyFreeEdges { free: free.len(), limit: MAX_FREE_EDGES });
        }
        Ok(ExactDistribution { instance, added: added.to_vec(), fixed, free })
    }

    /// Number of enumerated (random) edges.
    pub fn free_edges(&self) -> usize {
        self.free.len()
    }

    pub fn len(&self) -> usize {
        1 << self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every outcome with its probability, in mask order.
    pub fn outcomes(&self) -> impl Iterator<Item = (LiveEdgeGraph<'a>, f64)> + '_ {
        (0..self.len() as u64).map(move |mask| {
            let mut live = self.fixed.clone();
            let mut p = 1.0;
            for (bit, &(pos, q)) in self.free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    live[pos] = true;
                    p *= q;
                } else {
                    p *= 1.0 - q;
                }
            }
            (LiveEdgeGraph::from_mask(self.instance, &self.added, live), p)
        })
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Always,
    Free(u32),
}

/// `E ∪ S` restricted to edges that can matter, as a local adjacency list.
struct Compiled {
    adj: Vec<Vec<(u32, Slot, bool)>>,
    seeds: Vec<u32>,
    free: Vec<f64>,
}

impl Compiled {
    /// `removable` marks positions of `added` that form the set `T` of an
    /// `X^T` computation.
    fn new(inst: &ProblemInstance, added: &[CandidateEdge], removable: &[bool]) -> Result<Self> {
        let n = inst.n();
        let all: Vec<(u32, u32, f64, bool)> = inst
            .edges()
            .iter()
            .map(|e| (e.src.0, e.dst.0, e.prob, false))
            .chain(added.iter().zip(removable).map(|(c, &r)| (c.src.0, c.dst.0, c.prob, r)))
            .filter(|e| e.2 > 0.0)
            .collect();

        let mut possible: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(s, d, _, _) in &all {
            possible[s as usize].push(d);
        }
        let seeds: Vec<u32> = inst.seeds().iter().map(|s| s.0).collect();
        let mut relevant = vec![false; n];
        let mut stack = seeds.clone();
        for &s in &seeds {
            relevant[s as usize] = true;
        }
        while let Some(u) = stack.pop() {
            for &v in &possible[u as usize] {
                if !relevant[v as usize] {
                    relevant[v as usize] = true;
                    stack.push(v);
                }
            }
        }

        let mut adj = vec![Vec::new(); n];
        let mut free = Vec::new();
        for &(s, d, p, r) in &all {
            if !relevant[s as usize] {
                continue;
            }
            let slot = if p >= 1.0 {
                Slot::Always
            } else {
                free.push(p);
                Slot::Free(free.len() as u32 - 1)
            };
            adj[s as usize].push((d, slot, r));
        }
        if free.len() > MAX_FREE_EDGES {
            return Err(Error::TooManyFreeEdges { free: free.len(), limit: MAX_FREE_EDGES });
        }
        Ok(Compiled { adj, seeds, free })
    }

    fn probability(&self, mask: u64) -> f64 {
        let mut p = 1.0;
        for (bit, &q) in self.free.iter().enumerate() {
            p *= if mask >> bit & 1 == 1 { q } else { 1.0 - q };
        }
        p
    }

    fn count(&self, mask: u64, skip_removable: bool, seen: &mut [bool], stack: &mut Vec<u32>) -> usize {
        seen.fill(false);
        stack.clear();
        let mut count = 0;
        for &s in &self.seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
                count += 1;
            }
        }
        while let Some(u) = stack.pop() {
            for &(v, slot, removable) in &self.adj[u as usize] {
                if seen[v as usize] || (skip_removable && removable) {
                    continue;
                }
                let live = match slot {
                    Slot::Always => true,
                    Slot::Free(b) => mask >> b & 1 == 1,
                };
                if live {
                    seen[v as usize] = true;
                    stack.push(v);
                    count += 1;
                }
            }
        }
        count
    }
}

/// `σ(A, S) = Σ_X P[X]·|R(A, X)|` over every live-edge outcome `X` of `E ∪ S`.
pub fn exact_sigma(inst: &ProblemInstance, added: &[CandidateEdge]) -> Result<f64> {
    let c = Compiled::new(inst, added, &vec![false; added.len()])?;
    let mut seen = vec![false; inst.n()];
    let mut stack = Vec::new();
    let mut total = 0.0;
    for mask in 0..(1u64 << c.free.len()) {
        total += c.probability(mask) * c.count(mask, false, &mut seen, &mut stack) as f64;
    }
    Ok(total)
}

/// `δ(S₁, S₂) = Σ_{X ∈ χ(S₁)} P[X]·(|R(A, X)| − |R(A, X^T)|)` with
/// `T = S₁ \ S₂`, where `X^T` is `X` with the edges of `T` removed.
/// `S₂` must be a subset of `S₁` (matched on endpoints).
pub fn exact_delta(inst: &ProblemInstance, s1: &[CandidateEdge], s2: &[CandidateEdge]) -> Result<f64> {
    let key = |c: &CandidateEdge| (c.src, c.dst);
    if let Some(c) = s2.iter().find(|c| !s1.iter().any(|d| key(d) == key(c))) {
        return Err(Error::Config(format!("edge ({}, {}) of S2 is not in S1", c.src, c.dst)));
    }
    let removable: Vec<bool> = s1.iter().map(|c| !s2.iter().any(|d| key(d) == key(c))).collect();
    let c = Compiled::new(inst, s1, &removable)?;
    let mut seen = vec![false; inst.n()];
    let mut stack = Vec::new();
    let mut total = 0.0;
    for mask in 0..(1u64 << c.free.len()) {
        let with = c.count(mask, false, &mut seen, &mut stack);
        let without = c.count(mask, true, &mut seen, &mut stack);
        total += c.probability(mask) * (with - without) as f64;
    }
    Ok(total)
}

/// Best feasible candidate subset by exact spread. Among sets whose spread
/// ties within floating-point noise, the lexicographically smallest sorted
/// index list wins.
pub fn brute_force_opt(inst: &ProblemInstance) -> Result<Solution> {
    let cands = inst.candidates();
    if cands.len() > MAX_BRUTE_CANDIDATES {
        return Err(Error::TooManyCandidates { candidates: cands.len(), limit: MAX_BRUTE_CANDIDATES });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1u32 << cands.len()) {
        let idx: Vec<usize> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).collect();
        if inst.cost_of(&idx) > inst.budget() {
            continue;
        }
        let edges: Vec<CandidateEdge> = idx.iter().map(|&i| cands[i]).collect();
        let value = exact_sigma(inst, &edges)?;
        let replace = match &best {
            None => true,
            Some((bv, bi)) => match cmp_values(value, *bv, EXACT_TIE_EPS) {
                Ordering::Greater => true,
                Ordering::Equal => lex_less(&idx, bi),
                Ordering::Less => false,
            },
        };
        if replace {
            best = Some((value, idx));
        }
    }
    let (sigma, idx) = best.expect("the empty set is always feasible");
    let trace = idx
        .iter()
        .enumerate()
        .map(|(step, &i)| TraceEntry {
            step: step + 1,
            candidate: i,
            edge: cands[i],
            gain: None,
            sigma,
            status: TraceStatus::Accepted,
        })
        .collect();
    Ok(Solution::from_indices(inst, idx, sigma, trace))
}
