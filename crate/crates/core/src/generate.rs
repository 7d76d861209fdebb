//! Reproducible random instances.
//!
//! Edges follow a directed `G(n, p)` without self-loops, drawn by geometric
//! skipping so the cost is linear in `n + m` rather than `n²`. Edges, seeds
//! and candidates draw from separate streams derived from one seed, so e.g.
//! changing the candidate policy leaves the graph unchanged.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{default_candidates, CandidateEdge, Edge, NodeId, ProblemInstance};
use crate::rng::derive_seed;

/// A distribution over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dist {
    Constant(f64),
    Uniform(f64, f64),
}

impl Dist {
    fn validate(self, what: &str) -> Result<()> {
        let ok = match self {
            Dist::Constant(c) => (0.0..=1.0).contains(&c),
            Dist::Uniform(lo, hi) => (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("{what} distribution {self} is not over [0, 1]")))
        }
    }

    fn draw(self, rng: &mut impl Rng) -> f64 {
        match self {
            Dist::Constant(c) => c,
            Dist::Uniform(lo, hi) if lo == hi => lo,
            Dist::Uniform(lo, hi) => rng.gen_range(lo..=hi),
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Constant(c) => write!(f, "const:{c}"),
            Dist::Uniform(lo, hi) => write!(f, "uniform:{lo}:{hi}"),
        }
    }
}

/// `const:C` or `uniform:LO:HI`.
impl FromStr for Dist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| Error::Config(format!("bad number `{t}` in `{s}`")));
        match parts.as_slice() {
            ["const", c] => Ok(Dist::Constant(num(c)?)),
            ["uniform", lo, hi] => Ok(Dist::Uniform(num(lo)?, num(hi)?)),
            _ => Err(Error::Config(format!("expected const:C or uniform:LO:HI, got `{s}`"))),
        }
    }
}

/// Which candidate edges the instance offers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidatePolicy {
    /// Every seed-to-node pair that is not already an edge.
    All,
    /// A uniform subset of that pool of the given size (or the whole pool if
    /// it is smaller), kept in lexicographic order.
    Sample(usize),
}

/// `all` or `sample:K`.
impl FromStr for CandidatePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "all" => Ok(CandidatePolicy::All),
            Some(("sample", k)) => {
                k.parse().map(CandidatePolicy::Sample).map_err(|_| Error::Config(format!("bad candidate count `{k}`")))
            }
            _ => Err(Error::Config(format!("expected all or sample:K, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub n: usize,
    /// Probability that each ordered pair `(u, v)`, `u != v`, is an edge.
    pub density: f64,
    pub prob: Dist,
    pub seeds: usize,
    pub candidates: CandidatePolicy,
    /// Probability assigned to candidate edges.
    pub candidate_prob: Dist,
    pub cost: Dist,
    pub budget: f64,
    pub rng_seed: u64,
}

const EDGE_STREAM: u64 = 1;
const SEED_STREAM: u64 = 2;
const CANDIDATE_STREAM: u64 = 3;

pub fn gen_random_instance(spec: &GenSpec) -> Result<ProblemInstance> {
    if spec.n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Config(format!("density {} outside [0, 1]", spec.density)));
    }
    if spec.seeds == 0 || spec.seeds > spec.n {
        return Err(Error::Config(format!("seed count {} must be in 1..={}", spec.seeds, spec.n)));
    }
    spec.prob.validate("edge probability")?;
    spec.candidate_prob.validate("candidate probability")?;
    spec.cost.validate("cost")?;

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.rng_seed, EDGE_STREAM));
    let edges = gnp_edges(spec.n, spec.density, spec.prob, &mut rng);

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.rng_seed, SEED_STREAM));
    let seeds: Vec<NodeId> = sample(&mut rng, spec.n, spec.seeds).into_iter().map(|v| NodeId(v as u32)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.rng_seed, CANDIDATE_STREAM));
    let pool = default_candidates(spec.n, &edges, &seeds, |_, _| (0.0, 0.0));
    let picked: Vec<CandidateEdge> = match spec.candidates {
        CandidatePolicy::All => pool,
        CandidatePolicy::Sample(k) if k >= pool.len() => pool,
        CandidatePolicy::Sample(k) => {
            let mut idx = sample(&mut rng, pool.len(), k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| pool[i]).collect()
        }
    };
    let candidates = picked
        .into_iter()
        .map(|c| {
            let prob = spec.candidate_prob.draw(&mut rng);
            let cost = spec.cost.draw(&mut rng);
            CandidateEdge { prob, cost, ..c }
        })
        .collect();

    ProblemInstance::new(spec.n, edges, seeds, candidates, spec.budget)
}

/// Ordered pairs `(u, v)`, `u != v`, are numbered `u·(n−1) + r` with `v = r`
/// for `r < u` and `v = r + 1` otherwise. Gaps between successive edges are
/// geometric with parameter `density`.
fn gnp_edges(n: usize, density: f64, prob: Dist, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let total = n as u64 * (n as u64 - 1);
    let mut edges = Vec::new();
    if density == 0.0 || total == 0 {
        return edges;
    }
    let pair = |i: u64| {
        let u = i / (n as u64 - 1);
        let r = i % (n as u64 - 1);
        let v = if r < u { r } else { r + 1 };
        (u as u32, v as u32)
    };
    if density == 1.0 {
        for i in 0..total {
            let (u, v) = pair(i);
            edges.push(Edge::new(u, v, prob.draw(rng)));
        }
        return edges;
    }
    edges.reserve((total as f64 * density) as usize);
    let log_q = (1.0 - density).ln();
    let mut i: u64 = 0;
    loop {
        let r: f64 = 1.0 - rng.gen::<f64>();
        let skip = (r.ln() / log_q).floor();
        if skip >= (total - i) as f64 {
            break;
        }
        i += skip as u64;
        let (u, v) = pair(i);
        edges.push(Edge::new(u, v, prob.draw(rng)));
        i += 1;
        if i >= total {
            break;
        }
    }
    edges
}
