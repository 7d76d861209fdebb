use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{}: {cause}", path.display())]
    Json { path: PathBuf, cause: serde_json::Error },

    #[error("{}: {cause}", path.display())]
    Io { path: PathBuf, cause: std::io::Error },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("candidate source not a seed: ({src}, {dst})")]
    CandidateSourceNotSeed { src: NodeId, dst: NodeId },

    #[error("candidate ({src}, {dst}) duplicates an existing edge")]
    CandidateDuplicatesEdge { src: NodeId, dst: NodeId },

    #[error("instance too large for exact evaluation: {free} random edges (limit {limit})")]
    TooManyFreeEdges { free: usize, limit: usize },

    #[error("instance too large for brute force: {candidates} candidates (limit {limit})")]
    TooManyCandidates { candidates: usize, limit: usize },

    #[error("greedy_ima requires a unit-cost instance; use cost_greedy for general costs")]
    NotUnitCost,

    #[error("enumeration needs {needed} subset evaluations, cap is {cap}; lower M or use cost_greedy")]
    IterationCap { needed: u128, cap: u64 },

    #[error("unknown baseline strategy `{0}` (expected random, max_prob or high_outdegree_target)")]
    UnknownStrategy(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solution edge ({src}, {dst}) is not a seed-to-set edge of the reduction")]
    NotReductionEdge { src: NodeId, dst: NodeId },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
