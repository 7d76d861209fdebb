//! Budgeted edge augmentation for influence maximization.
//!
//! Given a directed graph with propagation probabilities, a seed set `A` and a
//! pool of candidate edges leaving the seeds, pick a set of candidate edges of
//! total cost at most the budget that maximizes the expected number of nodes
//! activated under the independent cascade model.
//!
//! The crate is organised as:
//!
//! * [`graph`]: problem instances, candidate pools, file formats and solutions.
//! * [`diffusion`]: live-edge sampling and Monte Carlo estimation of spread.
//! * [`oracle`]: exact spread by outcome enumeration and brute-force optima.
//! * [`solvers`]: greedy, cost-ratio greedy, enumeration greedy and baselines.
//! * [`reduction`]: maximum set coverage instances mapped to deterministic
//!   augmentation instances.
//! * [`generate`]: reproducible random instances.

pub mod diffusion;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod reduction;
pub mod rng;
pub mod solvers;

pub use diffusion::{
    estimate_sigma, marginal_gain, reach, sample_live_edge, LiveEdgeGraph, SamplingConfig, SigmaEstimate,
};
pub use error::{Error, Result};
pub use graph::{
    default_candidates, load_instance, write_solution, CandidateEdge, Edge, InstanceFormat, NodeId, ProblemInstance,
    Solution, SolutionFormat, TraceEntry, TraceStatus,
};
pub use oracle::{brute_force_opt, exact_delta, exact_sigma};
pub use solvers::{baseline, cost_greedy, enum_greedy, greedy_ima, Baseline, SigmaMode, SolverConfig};
