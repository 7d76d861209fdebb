#![allow(dead_code)]

use costima::{default_candidates, CandidateEdge, Edge, NodeId, ProblemInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Shape {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_candidates: usize,
    pub unit_cost: bool,
}

/// Small random instance. Probabilities are drawn from a mix of 0, 1 and
/// uniform values so that the pruning paths of the oracle get exercised.
pub fn random_instance(seed: u64, shape: &Shape) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=shape.max_nodes);
    let prob = |rng: &mut ChaCha8Rng| match rng.gen_range(0..8) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen::<f64>(),
    };
    let mut pairs: Vec<(u32, u32)> =
        (0..n as u32).flat_map(|u| (0..n as u32).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    shuffle(&mut pairs, &mut rng);
    let m = rng.gen_range(0..=shape.max_edges.min(pairs.len()));
    let mut edges: Vec<Edge> = pairs[..m].iter().map(|&(u, v)| Edge::new(u, v, prob(&mut rng))).collect();
    edges.sort_by_key(|e| (e.src, e.dst));

    let n_seeds = rng.gen_range(1..=(n - 1).clamp(1, 2));
    let mut nodes: Vec<u32> = (0..n as u32).collect();
    shuffle(&mut nodes, &mut rng);
    let seeds: Vec<NodeId> = nodes[..n_seeds].iter().map(|&v| NodeId(v)).collect();

    let mut pool = default_candidates(n, &edges, &seeds, |_, _| (0.0, 0.0));
    shuffle(&mut pool, &mut rng);
    pool.truncate(shape.max_candidates);
    pool.sort_by_key(|c| (c.src, c.dst));
    let candidates: Vec<CandidateEdge> = pool
        .into_iter()
        .map(|c| {
            let cost = if shape.unit_cost { 1.0 } else { rng.gen::<f64>() };
            CandidateEdge { prob: prob(&mut rng), cost, ..c }
        })
        .collect();
    let budget =
        if shape.unit_cost { rng.gen_range(0..=candidates.len().min(4)) as f64 } else { rng.gen_range(0.0..2.0) };
    ProblemInstance::new(n, edges, seeds, candidates, budget).unwrap()
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

/// Expected spread by summing over every subset of `E ∪ added` as a world,
/// with reachability from a transitive closure. Shares no code with the
/// library's oracle.
pub fn world_sum_sigma(inst: &ProblemInstance, added: &[CandidateEdge]) -> f64 {
    let arcs: Vec<(usize, usize, f64)> = inst
        .edges()
        .iter()
        .map(|e| (e.src.index(), e.dst.index(), e.prob))
        .chain(added.iter().map(|c| (c.src.index(), c.dst.index(), c.prob)))
        .collect();
    assert!(arcs.len() <= 20, "world enumeration too large");
    let n = inst.n();
    let mut total = 0.0;
    for world in 0u32..(1 << arcs.len()) {
        let mut p = 1.0;
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(u, v, q)) in arcs.iter().enumerate() {
            if world >> b & 1 == 1 {
                p *= q;
                r[u][v] = true;
            } else {
                p *= 1.0 - q;
            }
        }
        if p == 0.0 {
            continue;
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    let row_k = r[k].clone();
                    for (cell, &via) in r[i].iter_mut().zip(&row_k) {
                        *cell |= via;
                    }
                }
            }
        }
        let reached = (0..n).filter(|&v| inst.seeds().iter().any(|s| r[s.index()][v])).count();
        total += p * reached as f64;
    }
    total
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

pub fn edges_of(inst: &ProblemInstance, set: &[usize]) -> Vec<CandidateEdge> {
    set.iter().map(|&i| inst.candidates()[i]).collect()
}
