//! Problem instances: the directed probabilistic graph, the seed set, the
//! candidate edge pool and the budget.

mod io;
mod solution;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    atomic_write, fixed9, instance_to_json, load_edgelist, load_instance, solution_to_csv, solution_to_json,
    write_instance, write_solution, InstanceFormat, SolutionFormat,
};
pub use solution::{Solution, TraceEntry, TraceStatus};

/// Dense node index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// An existing arc of the graph with its propagation probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub prob: f64,
}

impl Edge {
    pub fn new(src: u32, dst: u32, prob: f64) -> Self {
        Edge { src: NodeId(src), dst: NodeId(dst), prob }
    }
}

/// An arc that may be added, leaving a seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub prob: f64,
    pub cost: f64,
}

impl CandidateEdge {
    pub fn new(src: u32, dst: u32, prob: f64, cost: f64) -> Self {
        CandidateEdge { src: NodeId(src), dst: NodeId(dst), prob, cost }
    }
}

/// Out-adjacency of the existing edges in compressed sparse row layout.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    probs: Vec<f64>,
    edge_ids: Vec<u32>,
}

impl Csr {
    fn build(n: usize, edges: &[Edge]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for e in edges {
            offsets[e.src.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let m = edges.len();
        let mut targets = vec![0u32; m];
        let mut probs = vec![0f64; m];
        let mut edge_ids = vec![0u32; m];
        for (id, e) in edges.iter().enumerate() {
            let slot = &mut fill[e.src.index()];
            targets[*slot] = e.dst.0;
            probs[*slot] = e.prob;
            edge_ids[*slot] = id as u32;
            *slot += 1;
        }
        Csr { offsets, targets, probs, edge_ids }
    }

    /// `(dst, prob, edge id)` for every out-edge of `u`.
    #[inline]
    pub(crate) fn out(&self, u: u32) -> impl Iterator<Item = (u32, f64, u32)> + '_ {
        let r = self.offsets[u as usize]..self.offsets[u as usize + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.probs[r.clone()])
            .zip(&self.edge_ids[r])
            .map(|((&t, &p), &id)| (t, p, id))
    }

    pub(crate) fn out_degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }
}

/// A validated instance. Immutable once built, so it can be shared across
/// worker threads.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    n: usize,
    edges: Vec<Edge>,
    seeds: Vec<NodeId>,
    candidates: Vec<CandidateEdge>,
    budget: f64,
    unit_cost: bool,
    labels: Option<Vec<String>>,
    adjacency: Csr,
    is_seed: Vec<bool>,
}

impl PartialEq for ProblemInstance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.seeds == other.seeds
            && self.candidates == other.candidates
            && self.budget.to_bits() == other.budget.to_bits()
            && self.unit_cost == other.unit_cost
            && self.labels == other.labels
    }
}

fn check_unit(x: f64, what: &str, src: NodeId, dst: NodeId) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidInstance(format!("{what} {x} of ({src}, {dst}) outside [0, 1]")));
    }
    Ok(())
}

fn is_integral(x: f64) -> bool {
    x.fract() == 0.0
}

impl ProblemInstance {
    /// Validates and builds an instance. Seeds are sorted and deduplicated.
    /// The unit-cost flag is inferred: set iff every candidate costs exactly 1
    /// and the budget is integral.
    pub fn new(
        n: usize,
        edges: Vec<Edge>,
        seeds: Vec<NodeId>,
        candidates: Vec<CandidateEdge>,
        budget: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("instance has no nodes".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidInstance(format!("{n} nodes exceed the u32 id space")));
        }
        let in_range = |v: NodeId| v.index() < n;

        let mut seeds = seeds;
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.is_empty() {
            return Err(Error::InvalidInstance("seed set is empty".into()));
        }
        if let Some(s) = seeds.iter().find(|s| !in_range(**s)) {
            return Err(Error::InvalidInstance(format!("seed {s} out of range (n = {n})")));
        }
        let mut is_seed = vec![false; n];
        for s in &seeds {
            is_seed[s.index()] = true;
        }

        let mut existing = HashSet::with_capacity(edges.len());
        for e in &edges {
            if !in_range(e.src) || !in_range(e.dst) {
                return Err(Error::InvalidInstance(format!("edge ({}, {}) out of range (n = {n})", e.src, e.dst)));
            }
            if e.src == e.dst {
                return Err(Error::InvalidInstance(format!("self-loop on node {}", e.src)));
            }
            check_unit(e.prob, "probability", e.src, e.dst)?;
            if !existing.insert((e.src, e.dst)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({}, {})", e.src, e.dst)));
            }
        }

        let mut seen = HashSet::with_capacity(candidates.len());
        for c in &candidates {
            if !in_range(c.src) || !in_range(c.dst) {
                return Err(Error::InvalidInstance(format!("candidate ({}, {}) out of range (n = {n})", c.src, c.dst)));
            }
            if !is_seed[c.src.index()] {
                return Err(Error::CandidateSourceNotSeed { src: c.src, dst: c.dst });
            }
            if c.src == c.dst {
                return Err(Error::InvalidInstance(format!("candidate self-loop on node {}", c.src)));
            }
            if existing.contains(&(c.src, c.dst)) {
                return Err(Error::CandidateDuplicatesEdge { src: c.src, dst: c.dst });
            }
            check_unit(c.prob, "probability", c.src, c.dst)?;
            check_unit(c.cost, "cost", c.src, c.dst)?;
            if !seen.insert((c.src, c.dst)) {
                return Err(Error::InvalidInstance(format!("duplicate candidate ({}, {})", c.src, c.dst)));
            }
        }

        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidInstance(format!("budget {budget} must be finite and non-negative")));
        }

        let unit_cost = candidates.iter().all(|c| c.cost == 1.0) && is_integral(budget);
        let adjacency = Csr::build(n, &edges);
        Ok(ProblemInstance { n, edges, seeds, candidates, budget, unit_cost, labels: None, adjacency, is_seed })
    }

    /// Forces the unit-cost flag. Setting it requires unit costs and an
    /// integral budget.
    pub fn with_unit_cost(mut self, unit_cost: bool) -> Result<Self> {
        if unit_cost && !(self.candidates.iter().all(|c| c.cost == 1.0) && is_integral(self.budget)) {
            return Err(Error::InvalidInstance(
                "unit_cost requires every candidate cost to be 1 and an integral budget".into(),
            ));
        }
        self.unit_cost = unit_cost;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidInstance(format!("{} labels for {} nodes", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_budget(self, budget: f64) -> Result<Self> {
        let unit = self.unit_cost;
        let inst = ProblemInstance::new(self.n, self.edges, self.seeds, self.candidates, budget)?;
        let inst = inst.with_unit_cost(unit && is_integral(budget))?;
        Ok(ProblemInstance { labels: self.labels, ..inst })
    }

    pub fn with_candidates(self, candidates: Vec<CandidateEdge>) -> Result<Self> {
        let inst = ProblemInstance::new(self.n, self.edges, self.seeds, candidates, self.budget)?;
        Ok(ProblemInstance { labels: self.labels, ..inst })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    pub fn candidates(&self) -> &[CandidateEdge] {
        &self.candidates
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn unit_cost(&self) -> bool {
        self.unit_cost
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_seed(&self, v: NodeId) -> bool {
        self.is_seed[v.index()]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.adjacency.out_degree(v.0)
    }

    pub(crate) fn adjacency(&self) -> &Csr {
        &self.adjacency
    }

    /// Sum of the costs of the given candidates, accumulated in the given order.
    pub fn cost_of(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.candidates[i].cost).sum()
    }
}

/// Every `(a, v)` with `a` a seed, `v != a` and `(a, v)` not already an edge,
/// ordered lexicographically. Seed-to-seed pairs are included even though
/// they can never change the spread, since seeds are active from the start.
pub fn default_candidates(
    n: usize,
    edges: &[Edge],
    seeds: &[NodeId],
    mut price: impl FnMut(NodeId, NodeId) -> (f64, f64),
) -> Vec<CandidateEdge> {
    let mut seeds: Vec<NodeId> = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let mut out_of: std::collections::HashMap<NodeId, HashSet<NodeId>> = Default::default();
    for e in edges {
        out_of.entry(e.src).or_default().insert(e.dst);
    }
    let empty = HashSet::new();
    let mut pool = Vec::new();
    for &a in &seeds {
        let taken = out_of.get(&a).unwrap_or(&empty);
        for v in (0..n as u32).map(NodeId) {
            if v == a || taken.contains(&v) {
                continue;
            }
            let (prob, cost) = price(a, v);
            pool.push(CandidateEdge { src: a, dst: v, prob, cost });
        }
    }
    pool
}
