//! Batch runs: every (request, algorithm) cell of a config, collected into a
//! table that serializes to CSV and JSON.

use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MistError, Result};
use crate::generate::generate_unit_disk;
use crate::graph::Graph;
use crate::io::read_graph;
use crate::oracle::DEFAULT_NODE_CAP;
use crate::paper::reconstruct_paper_instance;
use crate::pareto_path::PathSolverConfig;
use crate::steiner::{self, Algorithm, MulticastRequest, SteinerTreeResult, TreeReport, WitnessKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub nodes: usize,
    pub radius: f64,
    pub functions: usize,
    /// Falls back to the experiment seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    File(PathBuf),
    Generator(GeneratorSpec),
    /// The bundled ten-node instance; its eleven requests are used when the
    /// config lists none.
    Paper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestSpec {
    #[serde(default)]
    pub id: Option<String>,
    pub root: String,
    pub functions: Vec<String>,
}

fn default_node_cap() -> usize {
    DEFAULT_NODE_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    #[serde(default)]
    pub requests: Vec<RequestSpec>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub path_solver: PathSolverConfig,
    #[serde(default)]
    pub seed: u64,
    /// Wall-clock times make output differ run to run, so they are opt-in.
    #[serde(default)]
    pub record_runtime: bool,
    #[serde(default = "default_node_cap")]
    pub exact_node_cap: usize,
    /// Used when the command line gives no output directory.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn paper() -> Self {
        ExperimentConfig {
            graph: GraphSource::Paper,
            requests: Vec::new(),
            algorithms: vec![Algorithm::Tssr, Algorithm::Spt, Algorithm::St],
            path_solver: PathSolverConfig::default(),
            seed: 0,
            record_runtime: false,
            exact_node_cap: DEFAULT_NODE_CAP,
            out_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MistError::Config(e.to_string()))
    }

    /// Reads a config file; relative graph and output paths are taken
    /// relative to the file's directory.
    pub fn from_file(path: impl AsRef<FsPath>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(FsPath::new(""));
        if let GraphSource::File(p) = &mut cfg.graph {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(p) = &mut cfg.out_dir {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(MistError::Config("at least one algorithm is required".into()));
        }
        if self.requests.is_empty() && self.graph != GraphSource::Paper {
            return Err(MistError::Config("at least one request is required".into()));
        }
        self.path_solver
            .validate()
            .map_err(|e| MistError::Config(e.to_string()))
    }

    pub fn load_graph(&self) -> Result<Graph> {
        match &self.graph {
            GraphSource::File(p) => read_graph(p),
            GraphSource::Generator(g) => {
                generate_unit_disk(g.nodes, g.radius, g.functions, g.seed.unwrap_or(self.seed))
            }
            GraphSource::Paper => Ok(reconstruct_paper_instance().graph),
        }
    }

    /// Labelled requests, checked against the graph.
    pub fn resolve_requests(&self, g: &Graph) -> Result<Vec<(String, MulticastRequest)>> {
        let reqs = if self.requests.is_empty() {
            reconstruct_paper_instance().requests
        } else {
            self.requests
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let id = r.id.clone().unwrap_or_else(|| format!("R{}", i + 1));
                    let req = MulticastRequest::new(r.root.clone(), r.functions.iter().cloned())
                        .map_err(|e| MistError::Config(format!("requests[{i}]: {e}")))?;
                    Ok((id, req))
                })
                .collect::<Result<Vec<_>>>()?
        };
        for (id, r) in &reqs {
            steiner::terminals_of(g, r).map_err(|e| MistError::Config(format!("request {id}: {e}")))?;
        }
        Ok(reqs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub request_id: String,
    pub algorithm: Algorithm,
    pub length: Option<f64>,
    pub interference: Option<usize>,
    pub runtime_ms: Option<f64>,
    /// `exact`, `greedy`, `plain`, `enumeration` or `error`.
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub infeasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

pub const CSV_HEADER: &str = "request_id,algorithm,length,interference,runtime_ms,mode";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ResultTable {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<String>| x.unwrap_or_default();
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&r.request_id),
                r.algorithm.name(),
                opt(r.length.map(|x| x.to_string())),
                opt(r.interference.map(|x| x.to_string())),
                opt(r.runtime_ms.map(|x| format!("{x:.3}"))),
                r.mode
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result table serializes")
    }

    pub fn has_infeasible(&self) -> bool {
        self.rows.iter().any(|r| r.infeasible)
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn get(&self, request_id: &str, algorithm: Algorithm) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.request_id == request_id && r.algorithm == algorithm)
    }
}

fn mode_of(tree: &SteinerTreeResult) -> &'static str {
    match tree.algorithm {
        Algorithm::Spt | Algorithm::St => "plain",
        Algorithm::Exact => "enumeration",
        Algorithm::Tssr => {
            if tree.witnesses.iter().any(|w| w.mode == WitnessKind::Greedy) {
                "greedy"
            } else {
                "exact"
            }
        }
    }
}

fn run_cell(g: &Graph, cfg: &ExperimentConfig, id: &str, req: &MulticastRequest, algorithm: Algorithm) -> ResultRow {
    let start = Instant::now();
    let outcome = match algorithm {
        Algorithm::Exact => crate::oracle::exact_min_length_tree(g, req, cfg.exact_node_cap),
        other => steiner::solve(g, req, other, &cfg.path_solver),
    };
    let runtime_ms = cfg.record_runtime.then(|| start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok(tree) => ResultRow {
            request_id: id.to_string(),
            algorithm,
            length: Some(tree.total_length),
            interference: Some(tree.interference),
            runtime_ms,
            mode: mode_of(&tree).to_string(),
            error: None,
            infeasible: false,
            tree: Some(tree.report(g)),
        },
        Err(e) => ResultRow {
            request_id: id.to_string(),
            algorithm,
            length: None,
            interference: None,
            runtime_ms,
            mode: "error".to_string(),
            infeasible: e.is_infeasible(),
            error: Some(e.to_string()),
            tree: None,
        },
    }
}

/// Runs every requested cell in parallel; rows come out in
/// (request, algorithm) config order. Cell failures land in the table.
pub fn run_experiment_on(g: &Graph, cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let requests = cfg.resolve_requests(g)?;
    let cells: Vec<(&str, &MulticastRequest, Algorithm)> = requests
        .iter()
        .flat_map(|(id, r)| cfg.algorithms.iter().map(move |&a| (id.as_str(), r, a)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(id, r, a)| run_cell(g, cfg, id, r, a))
        .collect();
    Ok(ResultTable { rows })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let g = cfg.load_graph()?;
    run_experiment_on(&g, cfg)
}
