//! `mist`: generate instances, solve multicast requests, run experiments and
//! property suites.
//!
//! Exit codes: 0 success, 1 bad input or config, 2 infeasible instance
//! (disconnected terminals), 3 property-suite failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mist_core::experiment::{run_experiment_on, ExperimentConfig, ResultTable};
use mist_core::io::{graph_to_json, read_graph};
use mist_core::oracle::{
    enumerate_pareto_front, front_report, front_to_csv, verify_tree_against_front, DEFAULT_NODE_CAP,
};
use mist_core::paper::reconstruct_paper_instance;
use mist_core::pareto_path::{PathSolverConfig, SolverMode, DEFAULT_LABEL_CAP};
use mist_core::properties::{run_property_suites, Suite};
use mist_core::steiner::{self, Algorithm, MulticastRequest};
use mist_core::{generate::generate_unit_disk, MistError};

#[derive(Parser)]
#[command(
    name = "mist",
    version,
    about = "Interference-aware multicast trees for wireless mesh graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Tssr,
    Spt,
    St,
    Exact,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Tssr => Algorithm::Tssr,
            AlgoArg::Spt => Algorithm::Spt,
            AlgoArg::St => Algorithm::St,
            AlgoArg::Exact => Algorithm::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Greedy,
    Auto,
}

impl From<ModeArg> for SolverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SolverMode::Exact,
            ModeArg::Greedy => SolverMode::Greedy,
            ModeArg::Auto => SolverMode::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma1,
    Prune,
    Prop1,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma1 => Suite::Lemma1,
            SuiteArg::Prune => Suite::Prune,
            SuiteArg::Prop1 => Suite::Prop1,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FrontFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random unit-disk graph.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        functions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one multicast tree and print it as JSON.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: String,
        /// Comma-separated function labels, e.g. F1,F2.
        #[arg(long, value_delimiter = ',', required = true)]
        request: Vec<String>,
        #[arg(long, value_enum, default_value = "tssr")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_LABEL_CAP)]
        label_cap: usize,
        /// Node limit for `--algo exact`.
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment config, writing results.csv and results.json.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Worker threads; all cores when omitted.
        #[arg(long)]
        threads: Option<usize>,
        /// Record per-cell wall-clock times (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run randomized property suites.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the bundled ten-node experiment (11 requests, TSSR/SPT/ST).
    Paper {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Enumerate the exact (length, interference) front of a small instance
    /// and compare the heuristics against it.
    Front {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long, value_delimiter = ',', required = true)]
        request: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FrontFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure carrying the process exit code.
struct Exit(u8);

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<MistError>() {
        Some(e) if e.is_infeasible() => 2,
        _ => 1,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => anyhow::bail!("--threads must be at least 1"),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
    }
}

fn write_table(table: &ResultTable, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("results.csv"), table.to_csv())?;
    fs::write(dir.join("results.json"), table.to_json())?;
    Ok(())
}

fn table_status(table: &ResultTable) -> std::result::Result<(), Exit> {
    for r in table.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "{} {}: {}",
            r.request_id,
            r.algorithm,
            r.error.as_deref().unwrap_or_default()
        );
    }
    if table.has_infeasible() {
        Err(Exit(2))
    } else if table.has_errors() {
        Err(Exit(1))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<std::result::Result<(), Exit>> {
    match cli.command {
        Command::Gen {
            nodes,
            radius,
            functions,
            seed,
            out,
        } => {
            let g = generate_unit_disk(nodes, radius, functions, seed)?;
            emit(&graph_to_json(&g), out.as_deref())?;
        }
        Command::Solve {
            graph,
            root,
            request,
            algo,
            mode,
            label_cap,
            node_cap,
            out,
        } => {
            let g = read_graph(&graph).with_context(|| format!("loading {}", graph.display()))?;
            let req = MulticastRequest::new(root, request)?;
            let cfg = PathSolverConfig {
                mode: mode.into(),
                label_cap,
                ..PathSolverConfig::default()
            };
            let tree = match Algorithm::from(algo) {
                Algorithm::Exact => mist_core::oracle::exact_min_length_tree(&g, &req, node_cap)?,
                a => steiner::solve(&g, &req, a, &cfg)?,
            };
            emit(&serde_json::to_string_pretty(&tree.report(&g))?, out.as_deref())?;
        }
        Command::Bench {
            config,
            out_dir,
            threads,
            timing,
        } => {
            let mut cfg =
                ExperimentConfig::from_file(&config).with_context(|| format!("loading {}", config.display()))?;
            cfg.record_runtime |= timing;
            let dir = out_dir
                .or_else(|| cfg.out_dir.clone())
                .context("no output directory: pass --out-dir or set out_dir in the config")?;
            cfg.validate()?;
            let g = cfg.load_graph()?;
            let table = with_threads(threads, || run_experiment_on(&g, &cfg))??;
            write_table(&table, &dir)?;
            return Ok(table_status(&table));
        }
        Command::Check {
            suite,
            trials,
            seed,
            out,
        } => {
            let report = run_property_suites(suite.into(), trials, seed)?;
            let json = serde_json::to_string_pretty(&report)?;
            if let Some(p) = &out {
                fs::write(p, &json)?;
            }
            for r in &report.reports {
                println!(
                    "{:<20} trials={:<6} violations={:<4} {}",
                    r.suite,
                    r.trials,
                    r.violations.len(),
                    if r.passed { "ok" } else { "FAILED" }
                );
            }
            if !report.passed {
                eprintln!("{json}");
                return Ok(Err(Exit(3)));
            }
        }
        Command::Paper { out_dir, threads } => {
            let instance = reconstruct_paper_instance();
            let cfg = ExperimentConfig::paper();
            let table = with_threads(threads, || run_experiment_on(&instance.graph, &cfg))??;
            write_table(&table, &out_dir)?;
            fs::write(out_dir.join("graph.json"), graph_to_json(&instance.graph))?;
            print!("{}", table.to_csv());
            return Ok(table_status(&table));
        }
        Command::Front {
            graph,
            root,
            request,
            node_cap,
            format,
            out,
        } => {
            let g = read_graph(&graph).with_context(|| format!("loading {}", graph.display()))?;
            let req = MulticastRequest::new(root, request)?;
            let front = enumerate_pareto_front(&g, &req, node_cap)?;
            let text = match format {
                FrontFormat::Csv => front_to_csv(&g, &front),
                FrontFormat::Json => {
                    let cfg = PathSolverConfig::default();
                    let mut comparisons = serde_json::Map::new();
                    for a in [Algorithm::Tssr, Algorithm::Spt, Algorithm::St] {
                        let tree = steiner::solve(&g, &req, a, &cfg)?;
                        let cmp = verify_tree_against_front(&front, &tree)?;
                        comparisons.insert(a.name().to_string(), serde_json::to_value(cmp)?);
                    }
                    serde_json::to_string_pretty(&serde_json::json!({
                        "front": front_report(&g, &front),
                        "comparisons": comparisons,
                    }))?
                }
            };
            emit(&text, out.as_deref())?;
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Exit(code))) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
