use std::collections::HashMap;

use super::tie::EXACT_TIE_EPS;
use super::{SigmaMode, SolverConfig};
use crate::diffusion::{paired_gains, spread_moments, SamplingConfig};
use crate::error::Result;
use crate::graph::{CandidateEdge, ProblemInstance};
use crate::oracle::exact_sigma;

/// Spread of `S` and of every `S ∪ {e}` for `e` in a pool.
pub(crate) struct Evaluation {
    pub base: f64,
    pub with: Vec<f64>,
    pub gains: Vec<f64>,
}

/// `σ(A, ·)` over candidate index sets, exact or estimated.
///
/// Estimated values are keyed by a coin block: evaluations in the same block
/// share coins, so their differences are paired.
pub(crate) struct Objective<'a> {
    inst: &'a ProblemInstance,
    mode: SigmaMode,
    sampling: SamplingConfig,
    cache: HashMap<(Vec<usize>, u64), f64>,
}

impl<'a> Objective<'a> {
    pub fn new(inst: &'a ProblemInstance, cfg: &SolverConfig) -> Self {
        Objective { inst, mode: cfg.sigma_mode, sampling: cfg.sampling, cache: HashMap::new() }
    }

    pub fn eps(&self) -> f64 {
        match self.mode {
            SigmaMode::Exact => EXACT_TIE_EPS,
            SigmaMode::Estimate => 0.0,
        }
    }

    /// Seed of coin block `i`: the base seed plus `i`. Block 0 is used for
    /// reported values.
    pub fn block(&self, i: u64) -> u64 {
        self.sampling.base_seed.wrapping_add(i)
    }

    fn edges(&self, set: &[usize]) -> Vec<CandidateEdge> {
        set.iter().map(|&i| self.inst.candidates()[i]).collect()
    }

    pub fn sigma(&mut self, set: &[usize], block: u64) -> Result<f64> {
        let mut key: Vec<usize> = set.to_vec();
        key.sort_unstable();
        let block = if self.mode == SigmaMode::Exact { 0 } else { block };
        if let Some(&v) = self.cache.get(&(key.clone(), block)) {
            return Ok(v);
        }
        let edges = self.edges(&key);
        let v = match self.mode {
            SigmaMode::Exact => exact_sigma(self.inst, &edges)?,
            SigmaMode::Estimate => {
                let cfg = self.sampling.with_seed(block);
                spread_moments(self.inst, &edges, &cfg).mean(cfg.num_samples)
            }
        };
        self.cache.insert((key, block), v);
        Ok(v)
    }

    /// Spread of `set` and of `set ∪ {e}` for every `e` in `pool`.
    pub fn evaluate(&mut self, set: &[usize], pool: &[usize], block: u64) -> Result<Evaluation> {
        match self.mode {
            SigmaMode::Exact => {
                let base = self.sigma(set, 0)?;
                let mut with = Vec::with_capacity(pool.len());
                let mut ext = set.to_vec();
                for &e in pool {
                    ext.push(e);
                    with.push(self.sigma(&ext, 0)?);
                    ext.pop();
                }
                let gains = with.iter().map(|w| w - base).collect();
                Ok(Evaluation { base, with, gains })
            }
            SigmaMode::Estimate => {
                let cfg = self.sampling.with_seed(block);
                let n = cfg.num_samples;
                let pool_edges = self.edges(pool);
                let pg = paired_gains(self.inst, &self.edges(set), &pool_edges, &cfg);
                let base = pg.base.mean(n);
                let with = pg.gains.iter().map(|g| (pg.base.sum + g.sum) as f64 / n as f64).collect();
                let gains = pg.gains.iter().map(|g| g.mean(n)).collect();
                Ok(Evaluation { base, with, gains })
            }
        }
    }
}
