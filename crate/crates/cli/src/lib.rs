//! Command-line front end for `dagdml`: scenario runs, bias grids, CSV
//! estimation with interaction expansion, graph queries and dataset export.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dagdml::dml;
use dagdml::graph::CausalGraph;
use dagdml::montecarlo::{
    bias_grid, run_scenario_with, write_grid_artifact, write_scenario_artifacts, BiasGrid,
    GridAxis, McError, Metadata,
};
use dagdml::{Execution, LinearScm, McSummary, Method, ScenarioConfig, Template};
use serde_json::Value;
use thiserror::Error;

pub mod data;
pub mod expand;

pub use data::{ApplicationSpec, Controls, Table};
pub use expand::{expand_interactions, Expanded};

/// Smallest sample accepted by `estimate`.
pub const MIN_ESTIMATE_ROWS: usize = 21;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Graph(#[from] dagdml::graph::GraphError),
    #[error("{0}")]
    Estimate(#[from] dml::DmlError),
    #[error("{0}")]
    Io(String),
    /// Replications or grid cells failed beyond the tolerated share.
    #[error("{0}")]
    Failures(String),
}

impl CliError {
    pub(crate) fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failures(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dagdml", version, about = "Bad-control diagnostics for double machine learning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario, or both bias grids, from a JSON config
    Mc(McArgs),
    /// Run the strength-pair and sparsity bias grids around the baseline
    Grid(GridArgs),
    /// Estimate a treatment effect from a CSV file
    Estimate(EstimateArgs),
    /// Answer d-separation, backdoor and classification queries
    Graph(GraphArgs),
    /// Simulate one dataset from a scenario and write it as CSV
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunOpts {
    /// Base seed (overrides the config)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replications per scenario (overrides the config)
    #[arg(long)]
    pub reps: Option<usize>,
    /// Directory for artifacts
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Estimator: ols_all, naive_lasso, double_selection, partialling_out
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Worker threads (default: all cores)
    #[arg(long, conflicts_with = "sequential")]
    pub workers: Option<usize>,
    /// Run replications on the calling thread
    #[arg(long)]
    pub sequential: bool,
}

impl RunOpts {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel(self.workers)
        }
    }
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// JSON config: scenario fields plus optional `mode` and `method`
    pub config: PathBuf,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Optional JSON config supplying the base scenario
    pub config: Option<PathBuf>,
    /// Which grid to run: both, strengths or q
    #[arg(long, default_value = "both")]
    pub axis: String,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV file with a header row
    pub data: PathBuf,
    #[arg(long)]
    pub outcome: String,
    #[arg(long)]
    pub treatment: String,
    /// Comma-separated control columns, or `all-others`
    #[arg(long, default_value = "all-others")]
    pub controls: String,
    /// Interaction degree of the control expansion (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub degree: u8,
    #[arg(long, value_parser = parse_method, default_value = "double_selection")]
    pub method: Method,
    /// Also write `fit.json` here
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file: `A -> B`, `A <-> B`, `node N`, `#` comments
    pub file: PathBuf,
    #[command(subcommand)]
    pub query: Query,
}

#[derive(Debug, Subcommand)]
pub enum Query {
    /// Is A independent of B given Z? (A and B may be comma-separated sets)
    Dsep { a: String, b: String, z: Vec<String> },
    /// Is Z backdoor admissible for the effect of D on Y?
    Backdoor { d: String, y: String, z: Vec<String> },
    /// Classify X as a control for the effect of D on Y
    Classify { d: String, y: String, x: String },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Optional JSON scenario config
    pub config: Option<PathBuf>,
    /// Template when no config is given
    #[arg(long, value_parser = parse_template)]
    pub template: Option<Template>,
    /// Sample size (overrides the config)
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_str(s).map_err(|e| e.to_string())
}

fn parse_template(s: &str) -> Result<Template, String> {
    Template::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Scenario,
    Grid,
}

/// Parsed `mc` config document.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub scenario: ScenarioConfig,
    pub mode: Mode,
    pub method: Option<Method>,
}

impl McConfig {
    /// Fields missing from the document fall back to the baseline scenario
    /// of its template (good_control when absent).
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |m: String| CliError::Config(m);
        let value: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("malformed config: {e}")))?;
        let Value::Object(mut doc) = value else {
            return Err(bad("config must be a JSON object".into()));
        };
        let mode = match doc.remove("mode") {
            None => Mode::Scenario,
            Some(Value::String(s)) if s == "scenario" => Mode::Scenario,
            Some(Value::String(s)) if s == "grid" => Mode::Grid,
            Some(other) => return Err(bad(format!("mode must be \"scenario\" or \"grid\", got {other}"))),
        };
        let method = match doc.remove("method") {
            None => None,
            Some(Value::String(s)) => Some(Method::from_str(&s).map_err(|e| bad(e.to_string()))?),
            Some(other) => return Err(bad(format!("method must be a string, got {other}"))),
        };
        let template = match doc.get("template") {
            None => Template::GoodControl,
            Some(Value::String(s)) => Template::from_str(s).map_err(|e| bad(e.to_string()))?,
            Some(other) => return Err(bad(format!("template must be a string, got {other}"))),
        };
        let Value::Object(mut merged) = serde_json::to_value(ScenarioConfig::baseline(template))
            .expect("config serializes")
        else {
            unreachable!("config serializes to an object")
        };
        merged.extend(doc);
        let scenario: ScenarioConfig = serde_json::from_value(Value::Object(merged))
            .map_err(|e| bad(format!("invalid config: {e}")))?;
        Ok(McConfig {
            scenario,
            mode,
            method,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn apply_overrides(cfg: &mut ScenarioConfig, run: &RunOpts) -> Result<(), CliError> {
    if let Some(seed) = run.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = run.reps {
        cfg.reps = reps;
    }
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))
}

/// One-line scenario summary.
pub fn summary_line(s: &McSummary) -> String {
    format!(
        "template={} method={} reps={} failures={} target={} bias={:.4} sd={:.4} mean_se={:.4}",
        s.config.template, s.method, s.reps_done, s.failures, s.target, s.bias, s.sd, s.mean_se
    )
}

/// Plain-text rendering of a bias grid.
pub fn grid_table(grid: &BiasGrid) -> String {
    let labels = grid.axis.labels();
    let mut out = format!("{:<22}", grid.axis.header());
    for l in &labels {
        out.push_str(&format!("{l:>12}"));
    }
    out.push('\n');
    for row in &grid.rows {
        out.push_str(&format!("{:<22}", row.template.label()));
        for cell in &row.cells {
            let v = cell.bias().map_or("NA".to_string(), |b| format!("{b:.3}"));
            out.push_str(&format!("{v:>12}"));
        }
        out.push('\n');
    }
    out
}

fn run_grids<W: Write>(
    base: &ScenarioConfig,
    method: Method,
    axes: &[(&str, GridAxis)],
    run: &RunOpts,
    out: &mut W,
) -> Result<(), CliError> {
    let meta = Metadata::new(base.seed, base.reps);
    let mut failed = Vec::new();
    for (name, axis) in axes {
        let grid = bias_grid(base, axis, method, run.execution()).map_err(|e| CliError::Config(e.to_string()))?;
        let path = write_grid_artifact(&run.out_dir, name, &grid, &meta).map_err(CliError::io)?;
        writeln!(out, "{}\n{}", path.display(), grid_table(&grid)).map_err(CliError::io)?;
        for row in &grid.rows {
            for cell in &row.cells {
                if let Some(e) = &cell.error {
                    failed.push(format!("{name}/{}: {e}", row.template));
                }
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failures(format!(
            "{} grid cell(s) failed: {}",
            failed.len(),
            failed.join("; ")
        )))
    }
}

pub fn cmd_mc<W: Write>(args: &McArgs, out: &mut W) -> Result<(), CliError> {
    let mut cfg = McConfig::load(&args.config)?;
    apply_overrides(&mut cfg.scenario, &args.run)?;
    let method = args.run.method.or(cfg.method).unwrap_or(Method::DoubleSelection);
    match cfg.mode {
        Mode::Scenario => {
            let summary = run_scenario_with(
                &cfg.scenario,
                method,
                &dml::EstimatorOptions::default(),
                args.run.execution(),
            )
            .map_err(|e| match e {
                McError::TooManyFailures { .. } => CliError::Failures(e.to_string()),
                other => CliError::Config(other.to_string()),
            })?;
            write_scenario_artifacts(&args.run.out_dir, &summary).map_err(CliError::io)?;
            writeln!(out, "{}", summary_line(&summary)).map_err(CliError::io)
        }
        Mode::Grid => run_grids(&cfg.scenario, method, &default_axes("both")?, &args.run, out),
    }
}

fn default_axes(which: &str) -> Result<Vec<(&'static str, GridAxis)>, CliError> {
    let top = ("table1_top", GridAxis::default_strengths());
    let bottom = ("table1_bottom", GridAxis::default_q());
    match which {
        "both" => Ok(vec![top, bottom]),
        "strengths" => Ok(vec![top]),
        "q" => Ok(vec![bottom]),
        other => Err(CliError::Usage(format!(
            "unknown axis `{other}`; expected both, strengths or q"
        ))),
    }
}

pub fn cmd_grid<W: Write>(args: &GridArgs, out: &mut W) -> Result<(), CliError> {
    let axes = default_axes(&args.axis)?;
    let (mut base, method) = match &args.config {
        Some(path) => {
            let cfg = McConfig::load(path)?;
            (cfg.scenario, cfg.method)
        }
        None => (ScenarioConfig::baseline(Template::GoodControl), None),
    };
    apply_overrides(&mut base, &args.run)?;
    let method = args.run.method.or(method).unwrap_or(Method::DoubleSelection);
    run_grids(&base, method, &axes, &args.run, out)
}

/// Loads, expands and estimates; expansion notices go to `log`.
pub fn estimate_csv<L: Write>(
    table: &Table,
    spec: &ApplicationSpec,
    method: Method,
    log: &mut L,
) -> Result<dml::FitResult, CliError> {
    if table.n() < MIN_ESTIMATE_ROWS {
        return Err(CliError::Data(format!(
            "need more than {} rows, got {}",
            MIN_ESTIMATE_ROWS - 1,
            table.n()
        )));
    }
    let mut data = spec.dataset(table)?;
    let expanded = expand_interactions(&data.x, &data.control_names, spec.degree)?;
    for d in &expanded.dropped {
        writeln!(log, "note: dropped column `{}` ({})", d.name, d.reason).map_err(CliError::io)?;
    }
    data.x = expanded.x;
    data.control_names = expanded.names;
    Ok(dml::estimate(&data, method)?)
}

pub fn cmd_estimate<W: Write, L: Write>(
    args: &EstimateArgs,
    out: &mut W,
    log: &mut L,
) -> Result<(), CliError> {
    let file = fs::File::open(&args.data)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.data.display())))?;
    let table = Table::read(io::BufReader::new(file))?;
    let spec = ApplicationSpec {
        outcome: args.outcome.clone(),
        treatment: args.treatment.clone(),
        controls: Controls::parse(&args.controls),
        degree: args.degree,
    };
    let fit = estimate_csv(&table, &spec, args.method, log)?;
    let json = serde_json::to_string_pretty(&fit).expect("fit serializes");
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(CliError::io)?;
        fs::write(dir.join("fit.json"), &json).map_err(CliError::io)?;
    }
    writeln!(out, "{json}").map_err(CliError::io)
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn split_set(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty()).collect()
}

/// Evaluates a graph query and returns the printed answer.
pub fn graph_answer(g: &CausalGraph, query: &Query) -> Result<String, CliError> {
    Ok(match query {
        Query::Dsep { a, b, z } => g
            .d_separated(&split_set(a), &split_set(b), &refs(z))?
            .to_string(),
        Query::Backdoor { d, y, z } => {
            if g.backdoor_admissible(d, y, &refs(z))? {
                "admissible".into()
            } else {
                "not admissible".into()
            }
        }
        Query::Classify { d, y, x } => g.classify_control(d, y, x)?.to_string(),
    })
}

pub fn cmd_graph<W: Write>(args: &GraphArgs, out: &mut W) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.file.display())))?;
    let g = CausalGraph::parse(&text)?;
    writeln!(out, "{}", graph_answer(&g, &args.query)?).map_err(CliError::io)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => McConfig::load(path)?.scenario,
        None => ScenarioConfig::baseline(args.template.unwrap_or(Template::GoodControl)),
    };
    if let Some(t) = args.template {
        cfg.template = t;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let scm = LinearScm::from_template(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let data = scm.simulate(cfg.n, cfg.seed);
    if let Some(dir) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io)?;
    }
    let file = fs::File::create(&args.out).map_err(CliError::io)?;
    data::write_dataset(io::BufWriter::new(file), &data)
}

/// Runs a parsed command, writing answers to stdout and notices to stderr.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Mc(a) => cmd_mc(a, &mut out),
        Command::Grid(a) => cmd_grid(a, &mut out),
        Command::Estimate(a) => cmd_estimate(a, &mut out, &mut io::stderr()),
        Command::Graph(a) => cmd_graph(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a),
    }
}
