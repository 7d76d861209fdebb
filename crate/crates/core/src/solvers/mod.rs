//! Edge-selection algorithms.
//!
//! * [`greedy_ima`]: unit costs, `k` rounds of best `σ(A, S ∪ {e})`.
//! * [`cost_greedy`]: general costs, best gain-per-cost with a best-single-edge
//!   fallback.
//! * [`enum_greedy`]: every feasible size-`M` start completed by the
//!   cost-ratio greedy, against the best set smaller than `M`.
//! * [`baseline`]: myopic comparators.
//!
//! Every solver breaks ties towards the lowest candidate index. In exact mode
//! spreads that agree to a relative `1e-12` count as ties, because the same
//! value reached through different enumerations can differ in the last bits.

mod baseline;
mod cost_greedy;
mod enum_greedy;
mod greedy;
mod objective;
pub(crate) mod tie;

use std::str::FromStr;

use crate::diffusion::SamplingConfig;
use crate::error::Error;

pub use baseline::{baseline, Baseline};
pub use cost_greedy::cost_greedy;
pub use enum_greedy::enum_greedy;
pub use greedy::greedy_ima;

/// How solvers evaluate `σ(A, S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    /// Monte Carlo with common random numbers.
    Estimate,
    /// Full outcome enumeration; tiny instances only.
    Exact,
}

impl FromStr for SigmaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "estimate" => Ok(SigmaMode::Estimate),
            "exact" => Ok(SigmaMode::Exact),
            other => Err(Error::Config(format!("unknown sigma mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub sigma_mode: SigmaMode,
    pub sampling: SamplingConfig,
    /// Size of the enumerated starting sets of [`enum_greedy`].
    pub enum_size: usize,
    /// Stop as soon as the best remaining edge has zero gain.
    pub stop_on_zero_gain: bool,
    /// Largest number of subsets [`enum_greedy`] may evaluate.
    pub iteration_cap: u64,
}

impl SolverConfig {
    pub fn exact() -> Self {
        SolverConfig {
            sigma_mode: SigmaMode::Exact,
            sampling: SamplingConfig::new(1, 0),
            enum_size: 3,
            stop_on_zero_gain: false,
            iteration_cap: 1_000_000,
        }
    }

    pub fn estimate(sampling: SamplingConfig) -> Self {
        SolverConfig { sigma_mode: SigmaMode::Estimate, sampling, ..SolverConfig::exact() }
    }

    pub fn with_enum_size(mut self, m: usize) -> Self {
        self.enum_size = m;
        self
    }

    pub fn with_stop_on_zero_gain(mut self, stop: bool) -> Self {
        self.stop_on_zero_gain = stop;
        self
    }
}
