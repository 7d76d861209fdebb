use std::fmt;
use std::str::FromStr;

use costima::solvers::{baseline, cost_greedy, enum_greedy, greedy_ima, Baseline, SolverConfig};
use costima::{brute_force_opt, ProblemInstance, Solution};

/// A solver selectable by name: `greedy`, `cost-greedy`, `enum-greedy`,
/// `brute` or `baseline:<strategy>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Greedy,
    CostGreedy,
    EnumGreedy,
    Brute,
    Baseline(Baseline),
}

impl Algo {
    /// Runs the solver. `rng_seed` only matters to the random baseline.
    pub fn run(self, inst: &ProblemInstance, cfg: &SolverConfig, rng_seed: u64) -> costima::Result<Solution> {
        match self {
            Algo::Greedy => greedy_ima(inst, cfg),
            Algo::CostGreedy => cost_greedy(inst, cfg),
            Algo::EnumGreedy => enum_greedy(inst, cfg),
            Algo::Brute => brute_force_opt(inst),
            Algo::Baseline(b) => baseline(inst, b, rng_seed, cfg),
        }
    }
}

impl FromStr for Algo {
    type Err = costima::Error;

    fn from_str(s: &str) -> costima::Result<Self> {
        match s {
            "greedy" => Ok(Algo::Greedy),
            "cost-greedy" => Ok(Algo::CostGreedy),
            "enum-greedy" => Ok(Algo::EnumGreedy),
            "brute" => Ok(Algo::Brute),
            _ => match s.strip_prefix("baseline:") {
                Some(name) => name.parse().map(Algo::Baseline),
                None => Err(costima::Error::Config(format!(
                    "unknown algorithm `{s}` (expected greedy, cost-greedy, enum-greedy, brute or baseline:<name>)"
                ))),
            },
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::Greedy => f.write_str("greedy"),
            Algo::CostGreedy => f.write_str("cost-greedy"),
            Algo::EnumGreedy => f.write_str("enum-greedy"),
            Algo::Brute => f.write_str("brute"),
            Algo::Baseline(b) => write!(f, "baseline:{}", b.name()),
        }
    }
}
