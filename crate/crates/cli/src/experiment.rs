//! Batch runs over instances, algorithms and repetitions.
//!
//! Repetition `r` runs with seed `base_seed + r`. `results.csv` and
//! `results.json` hold only deterministic fields, so rerunning a batch
//! reproduces them byte for byte; wall-clock times go to `timings.csv`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use costima::generate::{gen_random_instance, GenSpec};
use costima::graph::{atomic_write, fixed9};
use costima::{load_instance, InstanceFormat, ProblemInstance, SamplingConfig, SigmaMode, SolverConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::algo::Algo;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub instances: Vec<InstanceSource>,
    pub algos: Vec<AlgoRun>,
    #[serde(default = "one")]
    pub repetitions: u64,
    #[serde(default)]
    pub base_seed: u64,
    /// Relative paths resolve against the experiment file's directory.
    pub out_dir: PathBuf,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSource {
    pub id: String,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub generate: Option<GenSpec>,
    /// Overrides the budget stored with the instance.
    #[serde(default)]
    pub budget: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoRun {
    pub algo: String,
    #[serde(default = "estimate_mode")]
    pub sigma: String,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_m", rename = "M")]
    pub enum_size: usize,
    #[serde(default)]
    pub stop_on_zero_gain: bool,
}

fn estimate_mode() -> String {
    "estimate".into()
}

fn default_samples() -> u64 {
    10_000
}

fn default_m() -> usize {
    3
}

/// One `(instance, algo, repetition)` run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub instance: String,
    pub algo: String,
    pub sigma_mode: String,
    pub repetition: u64,
    /// `None` when the instance failed to load.
    pub budget: Option<f64>,
    pub sigma: Option<f64>,
    pub total_cost: Option<f64>,
    pub edges: Option<usize>,
    pub rng_seed: u64,
    pub samples: u64,
    /// `sigma` over the `brute` result of the same instance and repetition,
    /// when the batch has one.
    pub ratio: Option<f64>,
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> anyhow::Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec: ExperimentSpec =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((spec, base))
    }

    pub fn validate(&self) -> anyhow::Result<Vec<(Algo, SolverConfig)>> {
        if self.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        if self.instances.is_empty() || self.algos.is_empty() {
            bail!("an experiment needs at least one instance and one algorithm");
        }
        for src in &self.instances {
            if src.path.is_some() == src.generate.is_some() {
                bail!("instance `{}` needs exactly one of `path` and `generate`", src.id);
            }
        }
        self.algos
            .iter()
            .map(|a| {
                let algo: Algo = a.algo.parse()?;
                let mode: SigmaMode = a.sigma.parse()?;
                if a.samples == 0 {
                    bail!("`{}`: samples must be positive", a.algo);
                }
                let sampling = SamplingConfig::new(a.samples, 0);
                let cfg = match mode {
                    SigmaMode::Exact => SolverConfig { sampling, ..SolverConfig::exact() },
                    SigmaMode::Estimate => SolverConfig::estimate(sampling),
                };
                Ok((algo, cfg.with_enum_size(a.enum_size).with_stop_on_zero_gain(a.stop_on_zero_gain)))
            })
            .collect()
    }
}

fn load_source(src: &InstanceSource, base: &Path) -> anyhow::Result<ProblemInstance> {
    let inst = match (&src.path, &src.generate) {
        (Some(p), _) => {
            let p = base.join(p);
            load_instance(&p, InstanceFormat::from_path(&p))?
        }
        (None, Some(g)) => gen_random_instance(g)?,
        (None, None) => unreachable!("validated"),
    };
    Ok(match src.budget {
        Some(b) => inst.with_budget(b)?,
        None => inst,
    })
}

/// Runs every job and returns the records in `(instance, algo, repetition)`
/// order. A failing run is recorded, not fatal.
pub fn run_experiment(spec: &ExperimentSpec, base: &Path) -> anyhow::Result<Vec<ResultRecord>> {
    let algos = spec.validate()?;
    let instances: Vec<Result<ProblemInstance, String>> =
        spec.instances.iter().map(|s| load_source(s, base).map_err(|e| format!("{e:#}"))).collect();

    let jobs: Vec<(usize, usize, u64)> = (0..instances.len())
        .flat_map(|i| (0..algos.len()).flat_map(move |a| (0..spec.repetitions).map(move |r| (i, a, r))))
        .collect();

    let mut records: Vec<ResultRecord> = jobs
        .par_iter()
        .map(|&(i, a, r)| {
            let (algo, cfg) = algos[a];
            let rng_seed = spec.base_seed.wrapping_add(r);
            let cfg = SolverConfig { sampling: cfg.sampling.with_seed(rng_seed), ..cfg };
            let started = Instant::now();
            let outcome = match &instances[i] {
                Ok(inst) => algo.run(inst, &cfg, rng_seed).map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            log::info!("{} {} rep {}: {:.1} ms", spec.instances[i].id, algo, r, wall_ms);
            let mut rec = ResultRecord {
                instance: spec.instances[i].id.clone(),
                algo: algo.to_string(),
                sigma_mode: spec.algos[a].sigma.clone(),
                repetition: r,
                budget: instances[i].as_ref().ok().map(|inst| inst.budget()),
                sigma: None,
                total_cost: None,
                edges: None,
                rng_seed,
                samples: cfg.sampling.num_samples,
                ratio: None,
                error: None,
                wall_ms,
            };
            match outcome {
                Ok(sol) => {
                    rec.sigma = Some(sol.sigma);
                    rec.total_cost = Some(sol.total_cost);
                    rec.edges = Some(sol.chosen.len());
                }
                Err(e) => rec.error = Some(e),
            }
            rec
        })
        .collect();

    let optimum: Vec<Option<f64>> = records
        .iter()
        .map(|rec| {
            records
                .iter()
                .find(|o| o.algo == "brute" && o.instance == rec.instance && o.repetition == rec.repetition)
                .and_then(|o| o.sigma)
        })
        .collect();
    for (rec, opt) in records.iter_mut().zip(optimum) {
        rec.ratio = match (rec.sigma, opt) {
            (Some(s), Some(o)) if o > 0.0 => Some(s / o),
            _ => None,
        };
    }
    Ok(records)
}

const CSV_HEADER: [&str; 12] = [
    "instance",
    "algo",
    "sigma_mode",
    "repetition",
    "budget",
    "sigma",
    "total_cost",
    "edges",
    "rng_seed",
    "samples",
    "ratio",
    "error",
];

fn f9(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.9}")).unwrap_or_default()
}

pub fn records_to_csv(records: &[ResultRecord]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.algo.clone(),
            r.sigma_mode.clone(),
            r.repetition.to_string(),
            f9(r.budget),
            f9(r.sigma),
            f9(r.total_cost),
            r.edges.map(|e| e.to_string()).unwrap_or_default(),
            r.rng_seed.to_string(),
            r.samples.to_string(),
            f9(r.ratio),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

// Field order is alphabetical so the emitted keys are sorted.
#[derive(Serialize)]
struct RecordOut<'a> {
    algo: &'a str,
    budget: Option<Box<RawValue>>,
    edges: Option<usize>,
    error: Option<&'a str>,
    instance: &'a str,
    ratio: Option<Box<RawValue>>,
    repetition: u64,
    rng_seed: u64,
    samples: u64,
    sigma: Option<Box<RawValue>>,
    sigma_mode: &'a str,
    total_cost: Option<Box<RawValue>>,
}

pub fn records_to_json(records: &[ResultRecord]) -> String {
    let out: Vec<RecordOut<'_>> = records
        .iter()
        .map(|r| RecordOut {
            algo: &r.algo,
            budget: r.budget.map(fixed9),
            edges: r.edges,
            error: r.error.as_deref(),
            instance: &r.instance,
            ratio: r.ratio.map(fixed9),
            repetition: r.repetition,
            rng_seed: r.rng_seed,
            samples: r.samples,
            sigma: r.sigma.map(fixed9),
            sigma_mode: &r.sigma_mode,
            total_cost: r.total_cost.map(fixed9),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&out).expect("records serialize");
    s.push('\n');
    s
}

pub fn timings_to_csv(records: &[ResultRecord]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["instance", "algo", "repetition", "wall_ms"])?;
    for r in records {
        w.write_record([r.instance.clone(), r.algo.clone(), r.repetition.to_string(), format!("{:.3}", r.wall_ms)])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes `results.csv`, `results.json` and `timings.csv` into `out_dir`,
/// each through a temporary file and a rename.
pub fn write_outputs(records: &[ResultRecord], out_dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    atomic_write(&out_dir.join("results.csv"), records_to_csv(records)?.as_bytes())?;
    atomic_write(&out_dir.join("results.json"), records_to_json(records).as_bytes())?;
    atomic_write(&out_dir.join("timings.csv"), timings_to_csv(records)?.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> ExperimentSpec {
        serde_json::from_str(json).unwrap()
    }

    const TINY: &str = r#"{
        "instances": [{"id": "g", "generate": {
            "n": 6, "density": 0.3, "prob": {"uniform": [0.0, 1.0]}, "seeds": 1,
            "candidates": {"sample": 5}, "candidate_prob": {"uniform": [0.0, 1.0]},
            "cost": {"uniform": [0.0, 1.0]}, "budget": 1.0, "rng_seed": 3}}],
        "algos": [{"algo": "brute", "sigma": "exact"}, {"algo": "cost-greedy", "sigma": "exact"},
                  {"algo": "baseline:random", "sigma": "exact"}],
        "repetitions": 3,
        "out_dir": "out"
    }"#;

    #[test]
    fn one_record_per_job_with_ratio() {
        let recs = run_experiment(&spec(TINY), Path::new(".")).unwrap();
        assert_eq!(recs.len(), 9);
        assert!(recs.iter().all(|r| r.error.is_none()));
        assert_eq!(recs.iter().map(|r| r.rng_seed).take(3).collect::<Vec<_>>(), vec![0, 1, 2]);
        for r in &recs {
            assert!(r.ratio.unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn failures_are_recorded() {
        let mut s = spec(TINY);
        s.algos = vec![AlgoRun {
            algo: "greedy".into(),
            sigma: "exact".into(),
            samples: 1,
            enum_size: 3,
            stop_on_zero_gain: false,
        }];
        let recs = run_experiment(&s, Path::new(".")).unwrap();
        assert!(recs.iter().all(|r| r.error.is_some() && r.sigma.is_none()));
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(TINY);
        s.repetitions = 0;
        assert!(s.validate().is_err());
        let mut s = spec(TINY);
        s.algos[0].algo = "celf".into();
        assert!(s.validate().is_err());
        let mut s = spec(TINY);
        s.instances[0].path = Some("x.json".into());
        assert!(s.validate().is_err());
    }

    #[test]
    fn csv_and_json_agree_on_rows() {
        let recs = run_experiment(&spec(TINY), Path::new(".")).unwrap();
        let csv = records_to_csv(&recs).unwrap();
        assert_eq!(csv.lines().count(), recs.len() + 1);
        let json: serde_json::Value = serde_json::from_str(&records_to_json(&recs)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), recs.len());
    }
}
