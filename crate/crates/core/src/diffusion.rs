//! Independent cascade simulation through live-edge sampling.
//!
//! A diffusion outcome is a live-edge graph: each edge of `E ∪ S` is kept with
//! its propagation probability, and the activated set is whatever the seeds
//! reach over kept edges. Coins are counter-based (see [`crate::rng`]): the
//! coin of edge `(u, v)` in sample `i` depends only on the base seed, `i`, `u`
//! and `v`. Two estimates that share a base seed therefore see the same coins
//! on every edge they share, which makes marginal gains paired differences
//! that are non-negative sample by sample.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CandidateEdge, Csr, NodeId, ProblemInstance};
use crate::rng;

/// Samples handed to one worker at a time. Fixed so the work split never
/// depends on the thread count.
const CHUNK: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub num_samples: u64,
    pub base_seed: u64,
    /// Target relative accuracy, reported only.
    pub lambda: Option<f64>,
    /// Failure probability, reported only.
    pub delta: Option<f64>,
    pub parallel: bool,
}

impl SamplingConfig {
    pub fn new(num_samples: u64, base_seed: u64) -> Self {
        SamplingConfig { num_samples, base_seed, lambda: None, delta: None, parallel: true }
    }

    /// Sample count from [`samples_for_accuracy`].
    pub fn from_accuracy(n: usize, lambda: f64, delta: f64, base_seed: u64) -> Result<Self> {
        let num_samples = samples_for_accuracy(n, lambda, delta)?;
        Ok(SamplingConfig { num_samples, base_seed, lambda: Some(lambda), delta: Some(delta), parallel: true })
    }

    pub fn with_seed(&self, base_seed: u64) -> Self {
        SamplingConfig { base_seed, ..*self }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

/// `⌈(n² / λ²) · ln(1/δ)⌉`, the simulation count after which the sample mean
/// is a `(1 + λ)`-approximation of the spread with probability `1 − δ`, taking
/// the unspecified constant as 1. Saturates at `u64::MAX`.
pub fn samples_for_accuracy(n: usize, lambda: f64, delta: f64) -> Result<u64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Config(format!("delta must lie in (0, 1), got {delta}")));
    }
    let n = n as f64;
    let raw = (n * n / (lambda * lambda) * (1.0 / delta).ln()).ceil();
    Ok(if raw >= u64::MAX as f64 { u64::MAX } else { (raw as u64).max(1) })
}

/// One sampled outcome of every coin on `E ∪ S`. Bit `i < |E|` is edge `i` of
/// the instance, bit `|E| + j` is the `j`-th added edge.
#[derive(Debug, Clone)]
pub struct LiveEdgeGraph<'a> {
    instance: &'a ProblemInstance,
    added: Vec<CandidateEdge>,
    live: Vec<bool>,
}

impl<'a> LiveEdgeGraph<'a> {
    /// Builds an outcome from an explicit mask over `E` followed by `added`.
    pub fn from_mask(instance: &'a ProblemInstance, added: &[CandidateEdge], live: Vec<bool>) -> Self {
        assert_eq!(live.len(), instance.edges().len() + added.len(), "mask length must be |E| + |S|");
        LiveEdgeGraph { instance, added: added.to_vec(), live }
    }

    pub fn instance(&self) -> &'a ProblemInstance {
        self.instance
    }

    pub fn added(&self) -> &[CandidateEdge] {
        &self.added
    }

    pub fn mask(&self) -> &[bool] {
        &self.live
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn is_live(&self, i: usize) -> bool {
        self.live[i]
    }

    pub fn live_count(&self) -> usize {
        self.live.iter().filter(|b| **b).count()
    }

    /// The same outcome with every edge in `positions` blocked.
    pub fn without(&self, positions: &[usize]) -> Self {
        let mut live = self.live.clone();
        for &p in positions {
            live[p] = false;
        }
        LiveEdgeGraph { instance: self.instance, added: self.added.clone(), live }
    }
}

/// Flips every coin of `E ∪ S` for sample `sample_index` of `cfg.base_seed`.
pub fn sample_live_edge<'a>(
    instance: &'a ProblemInstance,
    added: &[CandidateEdge],
    sample_index: u64,
    cfg: &SamplingConfig,
) -> LiveEdgeGraph<'a> {
    let seed = cfg.base_seed;
    let live = instance
        .edges()
        .iter()
        .map(|e| (e.src, e.dst, e.prob))
        .chain(added.iter().map(|c| (c.src, c.dst, c.prob)))
        .map(|(s, d, p)| rng::edge_live(seed, sample_index, s.0, d.0, p))
        .collect();
    LiveEdgeGraph { instance, added: added.to_vec(), live }
}

/// Nodes reachable from `sources` over live edges, sorted. Sources are always
/// included.
pub fn reach(x: &LiveEdgeGraph<'_>, sources: &[NodeId]) -> Vec<NodeId> {
    let inst = x.instance;
    let m = inst.edges().len();
    let mut extra: Vec<Vec<u32>> = vec![Vec::new(); inst.n()];
    for (j, c) in x.added.iter().enumerate() {
        if x.live[m + j] {
            extra[c.src.index()].push(c.dst.0);
        }
    }
    let mut seen = vec![false; inst.n()];
    let mut queue: Vec<u32> = Vec::new();
    for s in sources {
        if !seen[s.index()] {
            seen[s.index()] = true;
            queue.push(s.0);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let from_e = inst.adjacency().out(u).filter(|&(_, _, id)| x.live[id as usize]).map(|(v, _, _)| v);
        for v in from_e.chain(extra[u as usize].iter().copied()) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                queue.push(v);
            }
        }
    }
    let mut out: Vec<NodeId> = queue.into_iter().map(NodeId).collect();
    out.sort_unstable();
    out
}

/// Monte Carlo estimate of the spread `σ(A, S)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub value: f64,
    pub samples: u64,
    /// Unbiased sample variance of the per-sample spread.
    pub variance: f64,
    pub rng_seed: u64,
    /// Digest of the added edge set, hex.
    pub edge_set_hash: String,
    pub lambda: Option<f64>,
    pub delta: Option<f64>,
}

impl SigmaEstimate {
    pub fn std_error(&self) -> f64 {
        (self.variance / self.samples as f64).sqrt()
    }

    /// JSON with sorted keys and nine-decimal reals.
    pub fn to_json(&self) -> String {
        use crate::graph::fixed9 as f9;
        #[derive(Serialize)]
        struct Out {
            delta: Option<Box<serde_json::value::RawValue>>,
            edge_set_hash: String,
            lambda: Option<Box<serde_json::value::RawValue>>,
            rng_seed: u64,
            samples: u64,
            std_error: Box<serde_json::value::RawValue>,
            value: Box<serde_json::value::RawValue>,
            variance: Box<serde_json::value::RawValue>,
        }
        let out = Out {
            delta: self.delta.map(f9),
            edge_set_hash: self.edge_set_hash.clone(),
            lambda: self.lambda.map(f9),
            rng_seed: self.rng_seed,
            samples: self.samples,
            std_error: f9(self.std_error()),
            value: f9(self.value),
            variance: f9(self.variance),
        };
        let mut s = serde_json::to_string_pretty(&out).expect("estimate serializes");
        s.push('\n');
        s
    }
}

/// Digest of an edge set, independent of the order edges are listed in.
pub fn edge_set_hash(added: &[CandidateEdge]) -> String {
    let mut edges: Vec<&CandidateEdge> = added.iter().collect();
    edges.sort_by_key(|c| (c.src, c.dst));
    let words = edges
        .iter()
        .flat_map(|c| [(u64::from(c.src.0) << 32) | u64::from(c.dst.0), c.prob.to_bits(), c.cost.to_bits()]);
    format!("{:016x}", rng::digest(words))
}

/// Added edges as `(src, dst, prob)`, sorted by source for lookup.
fn added_by_source(added: &[CandidateEdge]) -> Vec<(u32, u32, f64)> {
    let mut v: Vec<(u32, u32, f64)> = added.iter().map(|c| (c.src.0, c.dst.0, c.prob)).collect();
    v.sort_by_key(|&(s, d, _)| (s, d));
    v
}

/// Reusable BFS state. Visited sets are epoch-stamped so a traversal costs
/// only what it touches.
struct Walker<'a> {
    adjacency: &'a Csr,
    seeds: &'a [NodeId],
    added: &'a [(u32, u32, f64)],
    mark: Vec<u32>,
    epoch: u32,
    extra_mark: Vec<u32>,
    extra_epoch: u32,
    queue: Vec<u32>,
}

fn bump(marks: &mut [u32], epoch: &mut u32) {
    if *epoch == u32::MAX {
        marks.fill(0);
        *epoch = 0;
    }
    *epoch += 1;
}

impl<'a> Walker<'a> {
    fn new(inst: &'a ProblemInstance, added: &'a [(u32, u32, f64)]) -> Self {
        Walker {
            adjacency: inst.adjacency(),
            seeds: inst.seeds(),
            added,
            mark: vec![0; inst.n()],
            epoch: 0,
            extra_mark: vec![0; inst.n()],
            extra_epoch: 0,
            queue: Vec::new(),
        }
    }

    fn added_from(&self, u: u32) -> &'a [(u32, u32, f64)] {
        let added = self.added;
        if added.is_empty() {
            return added;
        }
        let lo = added.partition_point(|e| e.0 < u);
        let hi = lo + added[lo..].partition_point(|e| e.0 == u);
        &added[lo..hi]
    }

    /// Spread of sample `sample`; leaves the reached set stamped with the
    /// current epoch.
    fn spread(&mut self, seed: u64, sample: u64) -> u64 {
        bump(&mut self.mark, &mut self.epoch);
        let epoch = self.epoch;
        self.queue.clear();
        for s in self.seeds {
            if self.mark[s.index()] != epoch {
                self.mark[s.index()] = epoch;
                self.queue.push(s.0);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for (v, p, _) in self.adjacency.out(u) {
                if self.mark[v as usize] != epoch && rng::edge_live(seed, sample, u, v, p) {
                    self.mark[v as usize] = epoch;
                    self.queue.push(v);
                }
            }
            for &(_, v, p) in self.added_from(u) {
                if self.mark[v as usize] != epoch && rng::edge_live(seed, sample, u, v, p) {
                    self.mark[v as usize] = epoch;
                    self.queue.push(v);
                }
            }
        }
        self.queue.len() as u64
    }

    /// Nodes that adding live edge `src -> dst` would newly reach, given the
    /// set stamped by the last [`Walker::spread`]. `src` must be reached.
    fn gain(&mut self, seed: u64, sample: u64, src: u32, dst: u32, prob: f64) -> u64 {
        let epoch = self.epoch;
        if self.mark[dst as usize] == epoch || !rng::edge_live(seed, sample, src, dst, prob) {
            return 0;
        }
        bump(&mut self.extra_mark, &mut self.extra_epoch);
        let extra = self.extra_epoch;
        self.queue.clear();
        self.extra_mark[dst as usize] = extra;
        self.queue.push(dst);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for (v, p, _) in self.adjacency.out(u) {
                let vi = v as usize;
                if self.mark[vi] != epoch && self.extra_mark[vi] != extra && rng::edge_live(seed, sample, u, v, p) {
                    self.extra_mark[vi] = extra;
                    self.queue.push(v);
                }
            }
            for &(_, v, p) in self.added_from(u) {
                let vi = v as usize;
                if self.mark[vi] != epoch && self.extra_mark[vi] != extra && rng::edge_live(seed, sample, u, v, p) {
                    self.extra_mark[vi] = extra;
                    self.queue.push(v);
                }
            }
        }
        self.queue.len() as u64
    }
}

/// Runs `body` over the sample range in fixed chunks, optionally in parallel,
/// and returns the per-chunk results in chunk order.
fn over_chunks<T, F>(inst: &ProblemInstance, added: &[(u32, u32, f64)], samples: u64, parallel: bool, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Walker<'_>, std::ops::Range<u64>) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let range = |c: u64| c * CHUNK..((c + 1) * CHUNK).min(samples);
    if parallel && chunks > 1 {
        (0..chunks).into_par_iter().map_init(|| Walker::new(inst, added), |w, c| body(w, range(c))).collect()
    } else {
        let mut w = Walker::new(inst, added);
        (0..chunks).map(|c| body(&mut w, range(c))).collect()
    }
}

/// Integer moments of a per-sample count. Integer sums make the reduction
/// exact, so results do not depend on scheduling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Moments {
    pub sum: u64,
    pub sum_sq: u128,
}

impl Moments {
    fn add(&mut self, x: u64) {
        self.sum += x;
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    fn merge(&mut self, o: &Moments) {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    pub fn mean(&self, n: u64) -> f64 {
        self.sum as f64 / n as f64
    }

    /// Unbiased variance, computed from exact integer moments.
    pub fn variance(&self, n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let n128 = u128::from(n);
        let s = u128::from(self.sum);
        let num = n128 * self.sum_sq - s * s;
        num as f64 / (n as f64 * (n - 1) as f64)
    }
}

pub(crate) fn spread_moments(inst: &ProblemInstance, added: &[CandidateEdge], cfg: &SamplingConfig) -> Moments {
    assert!(cfg.num_samples >= 1, "num_samples must be at least 1");
    let added = added_by_source(added);
    let seed = cfg.base_seed;
    let parts = over_chunks(inst, &added, cfg.num_samples, cfg.parallel, |w, r| {
        let mut m = Moments::default();
        for i in r {
            m.add(w.spread(seed, i));
        }
        m
    });
    parts.iter().fold(Moments::default(), |mut acc, m| {
        acc.merge(m);
        acc
    })
}

/// Per-sample spread of `S` and paired gains of each edge of `pool` on top of
/// `S`, sharing one set of coins.
#[derive(Debug, Clone)]
pub(crate) struct PairedGains {
    pub base: Moments,
    pub gains: Vec<Moments>,
}

pub(crate) fn paired_gains(
    inst: &ProblemInstance,
    added: &[CandidateEdge],
    pool: &[CandidateEdge],
    cfg: &SamplingConfig,
) -> PairedGains {
    assert!(cfg.num_samples >= 1, "num_samples must be at least 1");
    let added = added_by_source(added);
    let seed = cfg.base_seed;
    let parts = over_chunks(inst, &added, cfg.num_samples, cfg.parallel, |w, r| {
        let mut base = Moments::default();
        let mut gains = vec![Moments::default(); pool.len()];
        for i in r {
            base.add(w.spread(seed, i));
            for (g, c) in gains.iter_mut().zip(pool) {
                g.add(w.gain(seed, i, c.src.0, c.dst.0, c.prob));
            }
        }
        PairedGains { base, gains }
    });
    let mut total = PairedGains { base: Moments::default(), gains: vec![Moments::default(); pool.len()] };
    for p in &parts {
        total.base.merge(&p.base);
        for (t, g) in total.gains.iter_mut().zip(&p.gains) {
            t.merge(g);
        }
    }
    total
}

/// Estimates `σ(A, S)` as the mean spread over `cfg.num_samples` samples.
/// Bit-identical for identical inputs regardless of thread count.
pub fn estimate_sigma(inst: &ProblemInstance, added: &[CandidateEdge], cfg: &SamplingConfig) -> SigmaEstimate {
    let m = spread_moments(inst, added, cfg);
    SigmaEstimate {
        value: m.mean(cfg.num_samples),
        samples: cfg.num_samples,
        variance: m.variance(cfg.num_samples).max(0.0),
        rng_seed: cfg.base_seed,
        edge_set_hash: edge_set_hash(added),
        lambda: cfg.lambda,
        delta: cfg.delta,
    }
}

/// Paired estimate of a marginal gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub mean: f64,
    /// Standard error of the paired difference.
    pub std_error: f64,
}

/// Estimates `σ(A, S ∪ {e}) − σ(A, S)` using common random numbers, with its
/// standard error.
pub fn marginal_gain_estimate(
    inst: &ProblemInstance,
    added: &[CandidateEdge],
    edge: &CandidateEdge,
    cfg: &SamplingConfig,
) -> GainEstimate {
    debug_assert!(!added.iter().any(|c| c.src == edge.src && c.dst == edge.dst), "edge already in S");
    let pg = paired_gains(inst, added, std::slice::from_ref(edge), cfg);
    let n = cfg.num_samples;
    let g = &pg.gains[0];
    GainEstimate { mean: g.mean(n), std_error: (g.variance(n) / n as f64).sqrt() }
}

/// Estimates `σ(A, S ∪ {e}) − σ(A, S)` using common random numbers.
pub fn marginal_gain(
    inst: &ProblemInstance,
    added: &[CandidateEdge],
    edge: &CandidateEdge,
    cfg: &SamplingConfig,
) -> f64 {
    marginal_gain_estimate(inst, added, edge, cfg).mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn inst(n: usize, edges: Vec<Edge>, seeds: &[u32], cands: Vec<CandidateEdge>) -> ProblemInstance {
        ProblemInstance::new(n, edges, seeds.iter().map(|&s| NodeId(s)).collect(), cands, 1.0).unwrap()
    }

    fn chain() -> ProblemInstance {
        inst(3, vec![Edge::new(0, 1, 0.5), Edge::new(1, 2, 0.4)], &[0], vec![])
    }

    #[test]
    fn certain_and_impossible_masks() {
        let ones = inst(3, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)], &[0], vec![]);
        let zeros = inst(3, vec![Edge::new(0, 1, 0.0), Edge::new(1, 2, 0.0)], &[0], vec![]);
        let cfg = SamplingConfig::new(1, 99);
        for i in 0..100 {
            assert!(sample_live_edge(&ones, &[], i, &cfg).mask().iter().all(|b| *b));
            assert!(sample_live_edge(&zeros, &[], i, &cfg).mask().iter().all(|b| !*b));
        }
    }

    #[test]
    fn half_coin_frequency() {
        let g = inst(2, vec![Edge::new(0, 1, 0.5)], &[0], vec![]);
        let cfg = SamplingConfig::new(1, 2024);
        let live = (0..100_000).filter(|&i| sample_live_edge(&g, &[], i, &cfg).is_live(0)).count();
        let frac = live as f64 / 1e5;
        // 6.3 standard deviations of a fair binomial proportion at 1e5 draws.
        assert!((frac - 0.5).abs() <= 0.01, "{frac}");
    }

    #[test]
    fn reach_without_live_edges_is_sources() {
        let g = chain();
        let x = LiveEdgeGraph::from_mask(&g, &[], vec![false, false]);
        assert_eq!(reach(&x, &[NodeId(0)]), vec![NodeId(0)]);
    }

    #[test]
    fn reach_follows_live_chain() {
        let g = chain();
        let x = LiveEdgeGraph::from_mask(&g, &[], vec![true, true]);
        assert_eq!(reach(&x, &[NodeId(0)]), vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn reach_uses_added_edges() {
        let g = inst(3, vec![Edge::new(1, 2, 1.0)], &[0], vec![]);
        let add = [CandidateEdge::new(0, 1, 1.0, 1.0)];
        let x = LiveEdgeGraph::from_mask(&g, &add, vec![true, true]);
        assert_eq!(reach(&x, &[NodeId(0)]).len(), 3);
        assert_eq!(reach(&x.without(&[1]), &[NodeId(0)]).len(), 1);
    }

    #[test]
    fn seeds_only_estimate_is_exact() {
        let g = inst(5, vec![], &[0, 1, 2], vec![]);
        let e = estimate_sigma(&g, &[], &SamplingConfig::new(1000, 1));
        assert_eq!(e.value, 3.0);
        assert_eq!(e.variance, 0.0);
    }

    #[test]
    fn single_added_edge_bernoulli() {
        let g = inst(2, vec![], &[0], vec![]);
        let add = [CandidateEdge::new(0, 1, 0.7, 1.0)];
        let e = estimate_sigma(&g, &add, &SamplingConfig::new(1_000_000, 5));
        assert!((e.value - 1.7).abs() <= 0.003, "{}", e.value);
    }

    #[test]
    fn chain_estimate() {
        let e = estimate_sigma(&chain(), &[], &SamplingConfig::new(200_000, 11));
        assert!((e.value - 1.7).abs() <= 4.0 * e.std_error(), "{} ± {}", e.value, e.std_error());
    }

    #[test]
    fn estimate_is_independent_of_parallelism() {
        let g = chain();
        let cfg = SamplingConfig::new(10_000, 3);
        assert_eq!(estimate_sigma(&g, &[], &cfg), estimate_sigma(&g, &[], &cfg.sequential()));
    }

    #[test]
    fn walker_agrees_with_mask_reach() {
        let g = inst(
            5,
            vec![Edge::new(0, 1, 0.6), Edge::new(1, 2, 0.5), Edge::new(3, 4, 0.9), Edge::new(2, 0, 0.3)],
            &[0],
            vec![],
        );
        let add = [CandidateEdge::new(0, 3, 0.5, 1.0)];
        let sorted = added_by_source(&add);
        let mut w = Walker::new(&g, &sorted);
        let cfg = SamplingConfig::new(1, 77);
        for i in 0..500 {
            let x = sample_live_edge(&g, &add, i, &cfg);
            assert_eq!(w.spread(77, i) as usize, reach(&x, g.seeds()).len());
        }
    }

    #[test]
    fn gain_to_certainly_reached_node_is_zero() {
        let g = inst(3, vec![Edge::new(0, 1, 1.0)], &[0], vec![]);
        let e = CandidateEdge::new(0, 2, 0.0, 1.0);
        let cfg = SamplingConfig::new(1000, 1);
        assert_eq!(marginal_gain(&g, &[], &e, &cfg), 0.0);
        let g2 = inst(3, vec![Edge::new(1, 2, 1.0)], &[0, 1], vec![]);
        let e2 = CandidateEdge::new(0, 2, 0.8, 1.0);
        assert_eq!(marginal_gain(&g2, &[], &e2, &cfg), 0.0);
    }

    #[test]
    fn gain_to_isolated_node_with_certain_edge_is_one() {
        let g = inst(3, vec![Edge::new(0, 1, 0.5)], &[0], vec![]);
        let e = CandidateEdge::new(0, 2, 1.0, 1.0);
        assert_eq!(marginal_gain(&g, &[], &e, &SamplingConfig::new(1000, 1)), 1.0);
    }

    #[test]
    fn sample_bound_helper() {
        assert_eq!(samples_for_accuracy(10, 1.0, 0.5).unwrap(), 70);
        assert!(samples_for_accuracy(10, 0.0, 0.5).is_err());
        assert!(samples_for_accuracy(10, 0.1, 1.0).is_err());
    }
}
