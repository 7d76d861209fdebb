//! Instance and solution file formats.
//!
//! Edge-list instances are split across sibling files sharing a stem:
//! `graph.tsv` holds `src dst prob` lines, `graph.seeds` one seed per line and
//! the optional `graph.candidates` holds `src dst prob cost` lines. Fields are
//! separated by tabs or spaces, `#` starts a comment, and a `# nodes: N`
//! comment in the edge file fixes the node count (otherwise it is one past the
//! largest id seen). The budget is not part of the edge-list files.
//!
//! JSON instances are a single document:
//! `{"n":…, "edges":[[src,dst,prob],…], "seeds":[…], "candidates":[[src,dst,prob,cost],…], "budget":…}`
//! with optional `unit_cost` and `labels` (one string per node id).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{CandidateEdge, Edge, NodeId, ProblemInstance, Solution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFormat {
    EdgeList,
    Json,
}

impl InstanceFormat {
    /// `.json` means JSON, anything else is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InstanceFormat::Json,
            _ => InstanceFormat::EdgeList,
        }
    }
}

impl FromStr for InstanceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "tsv" => Ok(InstanceFormat::EdgeList),
            "json" => Ok(InstanceFormat::Json),
            other => Err(Error::Config(format!("unknown instance format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionFormat {
    Json,
    Csv,
}

impl SolutionFormat {
    /// `.csv` means CSV, anything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => SolutionFormat::Csv,
            _ => SolutionFormat::Json,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
    seeds: Vec<u32>,
    #[serde(default)]
    candidates: Vec<(u32, u32, f64, f64)>,
    #[serde(default)]
    budget: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit_cost: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |cause| Error::Io { path: path.to_path_buf(), cause }
}

pub fn load_instance(path: impl AsRef<Path>, format: InstanceFormat) -> Result<ProblemInstance> {
    let path = path.as_ref();
    match format {
        InstanceFormat::Json => load_json(path),
        InstanceFormat::EdgeList => {
            let seeds = path.with_extension("seeds");
            let cands = path.with_extension("candidates");
            let cands = cands.exists().then_some(cands);
            load_edgelist(path, &seeds, cands.as_deref(), 0.0)
        }
    }
}

fn load_json(path: &Path) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let doc: InstanceDoc =
        serde_json::from_str(&text).map_err(|cause| Error::Json { path: path.to_path_buf(), cause })?;
    let edges = doc.edges.into_iter().map(|(s, d, p)| Edge::new(s, d, p)).collect();
    let seeds = doc.seeds.into_iter().map(NodeId).collect();
    let cands = doc.candidates.into_iter().map(|(s, d, p, c)| CandidateEdge::new(s, d, p, c)).collect();
    let mut inst = ProblemInstance::new(doc.n, edges, seeds, cands, doc.budget)?;
    if let Some(unit) = doc.unit_cost {
        inst = inst.with_unit_cost(unit)?;
    }
    if let Some(labels) = doc.labels {
        inst = inst.with_labels(labels)?;
    }
    Ok(inst)
}

struct Lines {
    path: PathBuf,
    rows: Vec<(usize, Vec<String>)>,
    nodes: Option<usize>,
}

fn read_rows(path: &Path, arity: usize) -> Result<Lines> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    let mut nodes = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("nodes:") {
                let n = v.trim().parse::<usize>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("bad node count: {e}"),
                })?;
                nodes = Some(n);
            }
            continue;
        }
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<String> = body.split_whitespace().map(str::to_owned).collect();
        if fields.len() != arity {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("expected {arity} fields, found {}", fields.len()),
            });
        }
        rows.push((line, fields));
    }
    Ok(Lines { path: path.to_path_buf(), rows, nodes })
}

impl Lines {
    fn field<T: FromStr>(&self, line: usize, raw: &str, what: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        raw.parse::<T>().map_err(|e| Error::Parse {
            path: self.path.clone(),
            line,
            msg: format!("bad {what} `{raw}`: {e}"),
        })
    }
}

/// Loads an edge-list instance from explicit file paths.
pub fn load_edgelist(
    edges_path: &Path,
    seeds_path: &Path,
    candidates_path: Option<&Path>,
    budget: f64,
) -> Result<ProblemInstance> {
    let edge_lines = read_rows(edges_path, 3)?;
    let mut max_id: u32 = 0;
    let mut edges = Vec::with_capacity(edge_lines.rows.len());
    for (line, f) in &edge_lines.rows {
        let src: u32 = edge_lines.field(*line, &f[0], "source")?;
        let dst: u32 = edge_lines.field(*line, &f[1], "target")?;
        let prob: f64 = edge_lines.field(*line, &f[2], "probability")?;
        max_id = max_id.max(src).max(dst);
        edges.push(Edge::new(src, dst, prob));
    }

    let seed_lines = read_rows(seeds_path, 1)?;
    let mut seeds = Vec::with_capacity(seed_lines.rows.len());
    for (line, f) in &seed_lines.rows {
        let s: u32 = seed_lines.field(*line, &f[0], "seed")?;
        max_id = max_id.max(s);
        seeds.push(NodeId(s));
    }

    let mut cands = Vec::new();
    if let Some(cp) = candidates_path {
        let cand_lines = read_rows(cp, 4)?;
        for (line, f) in &cand_lines.rows {
            let src: u32 = cand_lines.field(*line, &f[0], "source")?;
            let dst: u32 = cand_lines.field(*line, &f[1], "target")?;
            let prob: f64 = cand_lines.field(*line, &f[2], "probability")?;
            let cost: f64 = cand_lines.field(*line, &f[3], "cost")?;
            max_id = max_id.max(src).max(dst);
            cands.push(CandidateEdge::new(src, dst, prob, cost));
        }
    }

    let n = edge_lines.nodes.unwrap_or(max_id as usize + 1);
    ProblemInstance::new(n, edges, seeds, cands, budget)
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn instance_to_json(inst: &ProblemInstance) -> String {
    let doc = InstanceDoc {
        n: inst.n(),
        edges: inst.edges().iter().map(|e| (e.src.0, e.dst.0, e.prob)).collect(),
        seeds: inst.seeds().iter().map(|s| s.0).collect(),
        candidates: inst.candidates().iter().map(|c| (c.src.0, c.dst.0, c.prob, c.cost)).collect(),
        budget: inst.budget(),
        unit_cost: Some(inst.unit_cost()),
        labels: inst.labels().map(<[String]>::to_vec),
    };
    let mut s = serde_json::to_string(&doc).expect("instance serializes");
    s.push('\n');
    s
}

/// Writes an instance as a JSON document. Reals use the shortest
/// representation that round-trips exactly.
pub fn write_instance(inst: &ProblemInstance, path: impl AsRef<Path>) -> Result<()> {
    atomic_write(path.as_ref(), instance_to_json(inst).as_bytes())
}

/// Fixed nine-decimal real, emitted verbatim.
pub fn fixed9(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.9}")).expect("finite real is valid JSON")
}

// Field order is alphabetical so the emitted keys are sorted.
#[derive(Serialize)]
struct ChosenOut {
    cost: Box<RawValue>,
    dst: u32,
    index: usize,
    prob: Box<RawValue>,
    src: u32,
}

#[derive(Serialize)]
struct TraceOut {
    candidate: usize,
    dst: u32,
    gain: Option<Box<RawValue>>,
    sigma: Box<RawValue>,
    src: u32,
    status: &'static str,
    step: usize,
}

#[derive(Serialize)]
struct SolutionOut {
    chosen: Vec<ChosenOut>,
    sigma: Box<RawValue>,
    total_cost: Box<RawValue>,
    trace: Vec<TraceOut>,
}

pub fn solution_to_json(sol: &Solution) -> String {
    let out = SolutionOut {
        chosen: sol
            .chosen
            .iter()
            .zip(&sol.chosen_indices)
            .map(|(c, &index)| ChosenOut {
                cost: fixed9(c.cost),
                dst: c.dst.0,
                index,
                prob: fixed9(c.prob),
                src: c.src.0,
            })
            .collect(),
        sigma: fixed9(sol.sigma),
        total_cost: fixed9(sol.total_cost),
        trace: sol
            .trace
            .iter()
            .map(|t| TraceOut {
                candidate: t.candidate,
                dst: t.edge.dst.0,
                gain: t.gain.map(fixed9),
                sigma: fixed9(t.sigma),
                src: t.edge.src.0,
                status: t.status.as_str(),
                step: t.step,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("solution serializes");
    s.push('\n');
    s
}

/// One CSV row per trace entry.
pub fn solution_to_csv(sol: &Solution) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "candidate", "src", "dst", "prob", "cost", "gain", "sigma", "status"])?;
    for t in &sol.trace {
        w.write_record([
            t.step.to_string(),
            t.candidate.to_string(),
            t.edge.src.to_string(),
            t.edge.dst.to_string(),
            format!("{:.9}", t.edge.prob),
            format!("{:.9}", t.edge.cost),
            t.gain.map(|g| format!("{g:.9}")).unwrap_or_default(),
            format!("{:.9}", t.sigma),
            t.status.as_str().to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_solution(sol: &Solution, path: impl AsRef<Path>, format: SolutionFormat) -> Result<()> {
    let text = match format {
        SolutionFormat::Json => solution_to_json(sol),
        SolutionFormat::Csv => solution_to_csv(sol)?,
    };
    atomic_write(path.as_ref(), text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{TraceEntry, TraceStatus};
    use tempfile::tempdir;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn loads_three_node_edgelist() {
        let dir = tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "# toy\n0\t1\t0.5\n");
        write(dir.path(), "g.seeds", "0\n");
        write(dir.path(), "g.candidates", "0 2 1.0 1.0\n");
        let inst = load_instance(&g, InstanceFormat::EdgeList).unwrap().with_budget(1.0).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.edges().len(), 1);
        assert_eq!(inst.seeds().len(), 1);
        assert_eq!(inst.candidates().len(), 1);
        assert_eq!(inst.budget(), 1.0);
    }

    #[test]
    fn node_count_comment_overrides_max_id() {
        let dir = tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "# nodes: 10\n0 1 0.5\n");
        write(dir.path(), "g.seeds", "0\n");
        let inst = load_instance(&g, InstanceFormat::EdgeList).unwrap();
        assert_eq!(inst.n(), 10);
        assert!(inst.candidates().is_empty());
    }

    #[test]
    fn parse_error_names_the_line() {
        let dir = tempdir().unwrap();
        let g = write(dir.path(), "g.tsv", "0 1 0.5\n1 2 abc\n");
        write(dir.path(), "g.seeds", "0\n");
        let err = load_instance(&g, InstanceFormat::EdgeList).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn candidate_from_non_seed_is_rejected_on_load() {
        let dir = tempdir().unwrap();
        let p = write(
            dir.path(),
            "i.json",
            r#"{"n":3,"edges":[[0,1,0.5]],"seeds":[0],"candidates":[[1,2,0.5,1.0]],"budget":1}"#,
        );
        let err = load_instance(&p, InstanceFormat::Json).unwrap_err();
        assert!(err.to_string().contains("candidate source not a seed"), "{err}");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let inst = ProblemInstance::new(
            4,
            vec![Edge::new(0, 1, 0.1 + 0.2), Edge::new(1, 3, 1.0 / 3.0)],
            vec![NodeId(0), NodeId(2)],
            vec![CandidateEdge::new(0, 2, 0.7, 0.25), CandidateEdge::new(2, 3, 0.123456789012345, 1.0)],
            1.75,
        )
        .unwrap()
        .with_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()])
        .unwrap();
        let dir = tempdir().unwrap();
        let p = dir.path().join("inst.json");
        write_instance(&inst, &p).unwrap();
        let back = load_instance(&p, InstanceFormat::Json).unwrap();
        assert_eq!(inst, back);
    }

    fn one_edge_solution(status: TraceStatus) -> Solution {
        let c = CandidateEdge::new(0, 2, 0.5, 0.25);
        let chosen = if status == TraceStatus::Accepted { vec![c] } else { vec![] };
        let idx = if status == TraceStatus::Accepted { vec![0] } else { vec![] };
        Solution {
            total_cost: chosen.iter().map(|c| c.cost).sum(),
            chosen,
            chosen_indices: idx,
            sigma: 1.5,
            trace: vec![TraceEntry { step: 1, candidate: 0, edge: c, gain: Some(0.5), sigma: 1.5, status }],
        }
    }

    #[test]
    fn empty_solution_json() {
        let sol = Solution { chosen: vec![], chosen_indices: vec![], total_cost: 0.0, sigma: 2.0, trace: vec![] };
        let v: serde_json::Value = serde_json::from_str(&solution_to_json(&sol)).unwrap();
        assert_eq!(v["chosen"], serde_json::json!([]));
        assert_eq!(v["sigma"].as_f64(), Some(2.0));
        assert!(solution_to_json(&sol).contains("\"sigma\": 2.000000000"));
    }

    #[test]
    fn chosen_edge_appears_in_json_with_sorted_keys() {
        let text = solution_to_json(&one_edge_solution(TraceStatus::Accepted));
        assert!(text.contains("\"cost\": 0.250000000"));
        assert!(text.contains("\"prob\": 0.500000000"));
        let keys: Vec<usize> =
            ["\"chosen\"", "\"sigma\"", "\"total_cost\"", "\"trace\""].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejected_trace_row_in_csv() {
        let csv = solution_to_csv(&one_edge_solution(TraceStatus::Rejected)).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].ends_with(",rejected"), "{}", rows[1]);
    }
}
