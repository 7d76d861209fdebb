//! Command-line front end and experiment runner for `costima`.

pub mod algo;
pub mod commands;
pub mod experiment;

pub use algo::Algo;
pub use commands::{run, Cli};
pub use experiment::{run_experiment, ExperimentSpec, ResultRecord};
