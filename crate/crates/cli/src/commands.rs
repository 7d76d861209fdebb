use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use costima::diffusion::edge_set_hash;
use costima::generate::{gen_random_instance, CandidatePolicy, Dist, GenSpec};
use costima::graph::{atomic_write, fixed9, write_instance};
use costima::oracle::ExactDistribution;
use costima::reduction::{load_msc, msc_to_ima, random_msc};
use costima::{
    brute_force_opt, default_candidates, estimate_sigma, exact_delta, exact_sigma, load_instance, write_solution,
    CandidateEdge, InstanceFormat, ProblemInstance, SamplingConfig, SigmaMode, SolutionFormat, SolverConfig,
};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::algo::Algo;
use crate::experiment::{run_experiment, write_outputs, ExperimentSpec};

#[derive(Debug, Parser)]
#[command(name = "costima", version, about = "Budgeted edge augmentation for influence maximization")]
pub struct Cli {
    /// Worker threads for sampling and experiments (default: all cores).
    #[arg(long, global = true, env = "COSTIMA_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo estimate of the spread with a set of added edges.
    Estimate(EstimateArgs),
    /// Exact spread by outcome enumeration (tiny instances only).
    Oracle(OracleArgs),
    /// Pick edges within the budget.
    Solve(SolveArgs),
    /// Build an instance from a maximum set coverage family.
    GenMsc(GenMscArgs),
    /// Build a reproducible random instance.
    GenRandom(GenRandomArgs),
    /// Run a batch described by a JSON experiment file.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Instance file: `.json`, or an edge list with sibling `.seeds` and
    /// optional `.candidates` files.
    #[arg(long)]
    pub instance: PathBuf,
    /// Force the instance format (`json` or `edgelist`).
    #[arg(long)]
    pub format: Option<InstanceFormat>,
    /// Override the instance budget.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Use every seed-to-node pair as a candidate with this `PROB:COST` when
    /// the instance lists none.
    #[arg(long, value_name = "PROB:COST")]
    pub default_candidates: Option<String>,
}

impl InstanceArgs {
    pub fn load(&self) -> anyhow::Result<ProblemInstance> {
        let format = self.format.unwrap_or_else(|| InstanceFormat::from_path(&self.instance));
        let mut inst =
            load_instance(&self.instance, format).with_context(|| format!("loading {}", self.instance.display()))?;
        if let Some(spec) = &self.default_candidates {
            if inst.candidates().is_empty() {
                let (p, c) = spec.split_once(':').context("--default-candidates expects PROB:COST")?;
                let (p, c): (f64, f64) = (p.parse()?, c.parse()?);
                let pool = default_candidates(inst.n(), inst.edges(), inst.seeds(), |_, _| (p, c));
                inst = inst.with_candidates(pool)?;
            }
        }
        if let Some(b) = self.budget {
            inst = inst.with_budget(b)?;
        }
        Ok(inst)
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Added edges: `SRC:DST` pairs separated by commas, or a file with one
    /// `SRC DST` pair per line. Each must be a candidate.
    #[arg(long, default_value = "")]
    pub edges_added: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target relative accuracy; with `--delta`, sets the sample count.
    #[arg(long, requires = "delta")]
    pub lambda: Option<f64>,
    #[arg(long, requires = "lambda")]
    pub delta: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Added edges, as for `estimate`.
    #[arg(long, default_value = "")]
    pub edges_added: String,
    /// Also report the exact difference against this subset of the added edges.
    #[arg(long)]
    pub minus: Option<String>,
    /// Report the brute-force optimum instead.
    #[arg(long, conflicts_with_all = ["edges_added", "minus"])]
    pub brute: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// greedy, cost-greedy, enum-greedy, brute or baseline:<random|max_prob|high_outdegree_target>.
    #[arg(long)]
    pub algo: Algo,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "estimate")]
    pub sigma: SigmaMode,
    /// Enumeration size for enum-greedy.
    #[arg(long = "M", default_value_t = 3)]
    pub m: usize,
    /// Most subsets enum-greedy may evaluate.
    #[arg(long, default_value_t = 1_000_000)]
    pub iteration_cap: u64,
    #[arg(long)]
    pub stop_on_zero_gain: bool,
    /// `.csv` writes the trace as CSV, anything else JSON (default: JSON on stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenMscArgs {
    /// Universe size.
    #[arg(long)]
    pub universe: usize,
    /// A file with one set per line, or `random:NUM_SETS[:SEED]`.
    #[arg(long)]
    pub sets: String,
    #[arg(long)]
    pub k: usize,
    /// Isolated extra seeds appended to the instance.
    #[arg(long, default_value_t = 0)]
    pub extra_seeds: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenRandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub density: f64,
    /// Edge probabilities: `const:P` or `uniform:LO:HI`.
    #[arg(long, default_value = "uniform:0:0.1")]
    pub prob: Dist,
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    /// `all` or `sample:K`.
    #[arg(long, default_value = "all")]
    pub candidates: CandidatePolicy,
    #[arg(long, default_value = "uniform:0:1")]
    pub candidate_prob: Dist,
    #[arg(long, default_value = "uniform:0:1")]
    pub cost: Dist,
    #[arg(long, default_value_t = 1.0)]
    pub budget: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON experiment file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Override the experiment file's output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Oracle(a) => oracle(a),
        Command::Solve(a) => solve(a),
        Command::GenMsc(a) => gen_msc(a),
        Command::GenRandom(a) => gen_random(a),
        Command::Experiment(a) => experiment(a),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => atomic_write(p, text.as_bytes())?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Resolves `SRC:DST,...` or a pair file to candidate edges.
fn parse_edges(inst: &ProblemInstance, spec: &str) -> anyhow::Result<Vec<CandidateEdge>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let pairs: Vec<(u32, u32)> = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                match f.as_slice() {
                    [s, d] => Ok((s.parse()?, d.parse()?)),
                    _ => bail!("expected `SRC DST`, got `{l}`"),
                }
            })
            .collect::<anyhow::Result<_>>()?
    } else {
        spec.split(',')
            .map(|t| {
                let (s, d) = t.trim().split_once(':').with_context(|| format!("expected SRC:DST, got `{t}`"))?;
                Ok((s.parse()?, d.parse()?))
            })
            .collect::<anyhow::Result<_>>()?
    };
    pairs
        .into_iter()
        .map(|(s, d)| {
            inst.candidates()
                .iter()
                .find(|c| c.src.0 == s && c.dst.0 == d)
                .copied()
                .with_context(|| format!("({s}, {d}) is not a candidate edge"))
        })
        .collect()
}

fn estimate(a: EstimateArgs) -> anyhow::Result<()> {
    let inst = a.instance.load()?;
    let added = parse_edges(&inst, &a.edges_added)?;
    let cfg = match (a.lambda, a.delta) {
        (Some(l), Some(d)) => SamplingConfig::from_accuracy(inst.n(), l, d, a.seed)?,
        _ => SamplingConfig::new(a.samples, a.seed),
    };
    if cfg.num_samples == 0 {
        bail!("--samples must be positive");
    }
    emit(&estimate_sigma(&inst, &added, &cfg).to_json(), a.out.as_deref())
}

// Field order is alphabetical so the emitted keys are sorted.
#[derive(Serialize)]
struct OracleOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<Box<RawValue>>,
    edge_set_hash: String,
    free_edges: usize,
    sigma: Box<RawValue>,
}

fn oracle(a: OracleArgs) -> anyhow::Result<()> {
    let inst = a.instance.load()?;
    if a.brute {
        let sol = brute_force_opt(&inst)?;
        return match &a.out {
            Some(p) => Ok(write_solution(&sol, p, SolutionFormat::from_path(p))?),
            None => emit(&costima::graph::solution_to_json(&sol), None),
        };
    }
    let added = parse_edges(&inst, &a.edges_added)?;
    let free_edges = ExactDistribution::new(&inst, &added)?.free_edges();
    let sigma = exact_sigma(&inst, &added)?;
    let delta = match &a.minus {
        Some(m) => Some(exact_delta(&inst, &added, &parse_edges(&inst, m)?)?),
        None => None,
    };
    let out =
        OracleOut { delta: delta.map(fixed9), edge_set_hash: edge_set_hash(&added), free_edges, sigma: fixed9(sigma) };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(&text, a.out.as_deref())
}

fn solve(a: SolveArgs) -> anyhow::Result<()> {
    let inst = a.instance.load()?;
    if a.samples == 0 {
        bail!("--samples must be positive");
    }
    let sampling = SamplingConfig::new(a.samples, a.seed);
    let cfg = SolverConfig {
        sigma_mode: a.sigma,
        sampling,
        enum_size: a.m,
        stop_on_zero_gain: a.stop_on_zero_gain,
        iteration_cap: a.iteration_cap,
    };
    let sol = a.algo.run(&inst, &cfg, a.seed)?;
    log::info!("{}: {} edges, cost {:.3}, sigma {:.6}", a.algo, sol.chosen.len(), sol.total_cost, sol.sigma);
    match &a.out {
        Some(p) => write_solution(&sol, p, SolutionFormat::from_path(p))?,
        None => emit(&costima::graph::solution_to_json(&sol), None)?,
    }
    Ok(())
}

fn gen_msc(a: GenMscArgs) -> anyhow::Result<()> {
    let msc = match a.sets.strip_prefix("random:") {
        Some(rest) => {
            let mut parts = rest.split(':');
            let num_sets: usize = parts.next().unwrap_or("").parse().context("random:NUM_SETS[:SEED]")?;
            let seed: u64 = parts.next().map(str::parse).transpose()?.unwrap_or(0);
            random_msc(a.universe, num_sets, Some(a.k), seed)?
        }
        None => load_msc(&a.sets, a.universe, a.k)?,
    };
    write_instance(&msc_to_ima(&msc, a.extra_seeds)?, &a.out)?;
    Ok(())
}

fn gen_random(a: GenRandomArgs) -> anyhow::Result<()> {
    let spec = GenSpec {
        n: a.n,
        density: a.density,
        prob: a.prob,
        seeds: a.seeds,
        candidates: a.candidates,
        candidate_prob: a.candidate_prob,
        cost: a.cost,
        budget: a.budget,
        rng_seed: a.seed,
    };
    write_instance(&gen_random_instance(&spec)?, &a.out)?;
    Ok(())
}

fn experiment(a: ExperimentArgs) -> anyhow::Result<()> {
    let (spec, base) = ExperimentSpec::load(&a.spec)?;
    let out_dir = a.out_dir.unwrap_or_else(|| base.join(&spec.out_dir));
    let records = run_experiment(&spec, &base)?;
    write_outputs(&records, &out_dir)?;
    let failed: Vec<_> = records.iter().filter(|r| r.error.is_some()).collect();
    for r in &failed {
        log::error!("{} {} rep {}: {}", r.instance, r.algo, r.repetition, r.error.as_deref().unwrap_or(""));
    }
    if !failed.is_empty() {
        bail!("{} of {} runs failed; see {}", failed.len(), records.len(), out_dir.join("results.csv").display());
    }
    Ok(())
}
