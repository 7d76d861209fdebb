//! Maximum set coverage instances as deterministic augmentation instances.
//!
//! Node layout of the generated instance: node 0 is the seed `a`, nodes
//! `1..=|F|` stand for the sets, the next `|X|` nodes for the elements, and
//! optional extra seeds come last. Every probability is 0 or 1, so exact
//! spread needs no enumeration at all.

use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{CandidateEdge, Edge, NodeId, ProblemInstance, Solution};

/// Universe `0..universe_size`, a family of subsets, and the number of sets to pick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MscInstance {
    universe_size: usize,
    sets: Vec<Vec<u32>>,
    k: usize,
}

impl MscInstance {
    /// Sets are sorted and deduplicated. Each must be nonempty and inside the
    /// universe, and `1 <= k <= |sets|`.
    pub fn new(universe_size: usize, sets: Vec<Vec<u32>>, k: usize) -> Result<Self> {
        let mut sets = sets;
        for (j, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::InvalidInstance(format!("set {j} is empty")));
            }
            if let Some(x) = set.iter().find(|&&x| x as usize >= universe_size) {
                return Err(Error::InvalidInstance(format!(
                    "set {j} has element {x} outside universe of {universe_size}"
                )));
            }
        }
        if k == 0 || k > sets.len() {
            return Err(Error::InvalidInstance(format!("k = {k} must be in 1..={}", sets.len())));
        }
        Ok(MscInstance { universe_size, sets, k })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct elements covered by the given sets.
    pub fn coverage(&self, family: &[usize]) -> usize {
        let mut hit = vec![false; self.universe_size];
        for &j in family {
            for &x in &self.sets[j] {
                hit[x as usize] = true;
            }
        }
        hit.into_iter().filter(|&h| h).count()
    }

    /// Node id of set `j` in the generated instance.
    pub fn set_node(&self, j: usize) -> NodeId {
        NodeId(1 + j as u32)
    }

    /// Node id of element `x` in the generated instance.
    pub fn element_node(&self, x: u32) -> NodeId {
        NodeId(1 + self.sets.len() as u32 + x)
    }
}

/// Parses one set per line as whitespace-separated element ids. Blank lines
/// and `#` comments are skipped.
pub fn parse_msc(text: &str, universe_size: usize, k: usize, path: &Path) -> Result<MscInstance> {
    let mut sets = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let set = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    msg: format!("element `{tok}`: {e}"),
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        sets.push(set);
    }
    MscInstance::new(universe_size, sets, k)
}

pub fn load_msc(path: impl AsRef<Path>, universe_size: usize, k: usize) -> Result<MscInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|cause| Error::Io { path: path.to_path_buf(), cause })?;
    parse_msc(&text, universe_size, k, path)
}

/// Random family of `num_sets` nonempty sets; each set has a uniform size in
/// `1..=universe_size` and uniform members. `k` is drawn from `1..=num_sets`
/// when `None`.
pub fn random_msc(universe_size: usize, num_sets: usize, k: Option<usize>, rng_seed: u64) -> Result<MscInstance> {
    if universe_size == 0 || num_sets == 0 {
        return Err(Error::Config("random set family needs a nonempty universe and at least one set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let sets = (0..num_sets)
        .map(|_| {
            let size = rng.gen_range(1..=universe_size);
            sample(&mut rng, universe_size, size).into_iter().map(|x| x as u32).collect()
        })
        .collect();
    let k = k.unwrap_or_else(|| rng.gen_range(1..=num_sets));
    MscInstance::new(universe_size, sets, k)
}

/// Builds the augmentation instance: set-to-element edges with probability 1,
/// candidates `(a, v_S)` with probability 1 and cost 1, budget `k`.
/// `extra_seeds` isolated seeds are appended; they never change which
/// candidates are worth adding.
pub fn msc_to_ima(msc: &MscInstance, extra_seeds: usize) -> Result<ProblemInstance> {
    let f = msc.sets.len();
    let n = 1 + f + msc.universe_size + extra_seeds;
    let edges = msc
        .sets
        .iter()
        .enumerate()
        .flat_map(|(j, set)| set.iter().map(move |&x| (j, x)))
        .map(|(j, x)| Edge { src: msc.set_node(j), dst: msc.element_node(x), prob: 1.0 })
        .collect();
    let mut seeds = vec![NodeId(0)];
    seeds.extend((n - extra_seeds..n).map(|v| NodeId(v as u32)));
    let candidates =
        (0..f).map(|j| CandidateEdge { src: NodeId(0), dst: msc.set_node(j), prob: 1.0, cost: 1.0 }).collect();
    ProblemInstance::new(n, edges, seeds, candidates, msc.k as f64)?.with_unit_cost(true)
}

/// Set indices picked by a solution on `msc_to_ima(msc, _)`, in solution order.
pub fn ima_to_msc_solution(sol: &Solution, msc: &MscInstance) -> Result<Vec<usize>> {
    sol.chosen
        .iter()
        .map(|e| {
            let j = e.dst.index().wrapping_sub(1);
            if e.src != NodeId(0) || j >= msc.sets.len() {
                return Err(Error::NotReductionEdge { src: e.src, dst: e.dst });
            }
            Ok(j)
        })
        .collect()
}
