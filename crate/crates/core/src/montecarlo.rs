//! Replication engine: scenario runs, bias grids, studentized draws and the
//! CSV/JSON artifacts they produce.
//!
//! Replication `r` always simulates from `derive_seed(cfg.seed, r)` and
//! results are aggregated in replication order, so output is bit-identical
//! for any worker count.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::dml::{self, EstimatorOptions, Method};
use crate::regress::{PLUGIN_C, PLUGIN_FIRST_PASS_SCALE, PLUGIN_SIGMA_ITERATIONS};
use crate::scm::{LinearScm, ScenarioConfig, ScmError, Template, CONFOUNDING_STRENGTH};

/// Share of replications allowed to fail before a scenario errors.
pub const MAX_FAILURE_SHARE: f64 = 0.01;

/// Histogram bins for studentized draws: width 0.25 over [-5, 5).
pub const HIST_LO: f64 = -5.0;
pub const HIST_HI: f64 = 5.0;
pub const HIST_WIDTH: f64 = 0.25;

// keeps grid-cell seeds apart from replication counters
const GRID_STREAM: u64 = 1 << 40;

#[derive(Debug, Error)]
pub enum McError {
    #[error(transparent)]
    Config(#[from] ScmError),
    #[error("{failures} of {reps} replications failed (first: {first})")]
    TooManyFailures {
        failures: usize,
        reps: usize,
        first: String,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("empty grid axis")]
    EmptyAxis,
    #[error("strength pair ({0}, {1}) outside (0, 1)")]
    BadStrength(f64, f64),
}

pub type Result<T> = std::result::Result<T, McError>;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `r` under base seed `seed`.
pub fn derive_seed(seed: u64, r: u64) -> u64 {
    seed ^ splitmix64(r)
}

/// How replications are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool; `None` uses the global pool, `Some(k)` a dedicated pool
    /// of `k` threads. Runs sequentially when the `parallel` feature is off.
    Parallel(Option<usize>),
}

impl Default for Execution {
    fn default() -> Self {
        Execution::Parallel(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: usize,
    pub theta_hat: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub config: ScenarioConfig,
    pub method: Method,
    pub reps_done: usize,
    pub failures: usize,
    /// Total effect for good_control / m_graph, direct effect otherwise.
    pub target: f64,
    /// mean(theta_hat) - target
    pub bias: f64,
    pub sd: f64,
    pub mean_se: f64,
    pub studentized: Vec<f64>,
    pub records: Vec<RepRecord>,
    pub first_failure: Option<String>,
}

type RepOutcome = std::result::Result<(f64, f64), String>;

fn schedule<F>(reps: usize, exec: Execution, job: F) -> Result<Vec<RepOutcome>>
where
    F: Fn(usize) -> RepOutcome + Sync + Send,
{
    match exec {
        Execution::Sequential => Ok((1..=reps).map(job).collect()),
        #[cfg(feature = "parallel")]
        Execution::Parallel(workers) => {
            use rayon::prelude::*;
            let run = || (1..=reps).into_par_iter().map(&job).collect::<Vec<_>>();
            match workers {
                None => Ok(run()),
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(k.max(1))
                    .build()
                    .map(|pool| pool.install(run))
                    .map_err(|e| McError::ThreadPool(e.to_string())),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel(_) => Ok((1..=reps).map(job).collect()),
    }
}

/// Estimation target for a scenario.
pub fn scenario_target(scm: &LinearScm, template: Template) -> Result<f64> {
    let (d, y) = (scm.treatment(), scm.outcome());
    Ok(if template.targets_direct_effect() {
        scm.direct_effect(d, y)?
    } else {
        scm.total_effect(d, y)?
    })
}

pub fn run_scenario(cfg: &ScenarioConfig, method: Method) -> Result<McSummary> {
    run_scenario_with(cfg, method, &EstimatorOptions::default(), Execution::default())
}

pub fn run_scenario_with(
    cfg: &ScenarioConfig,
    method: Method,
    opts: &EstimatorOptions,
    exec: Execution,
) -> Result<McSummary> {
    let scm = LinearScm::from_template(cfg)?;
    let target = scenario_target(&scm, cfg.template)?;
    let outcomes = schedule(cfg.reps, exec, |r| {
        let data = scm.simulate(cfg.n, derive_seed(cfg.seed, r as u64));
        match dml::estimate_with(&data, method, opts) {
            Ok(fit) if fit.theta_hat.is_finite() && fit.se.is_finite() && fit.se > 0.0 => {
                Ok((fit.theta_hat, fit.se))
            }
            Ok(fit) => Err(format!(
                "degenerate fit: theta_hat={} se={}",
                fit.theta_hat, fit.se
            )),
            Err(e) => Err(e.to_string()),
        }
    })?;
    summarize(cfg, method, target, outcomes)
}

fn summarize(
    cfg: &ScenarioConfig,
    method: Method,
    target: f64,
    outcomes: Vec<RepOutcome>,
) -> Result<McSummary> {
    let mut records = Vec::with_capacity(outcomes.len());
    let mut failures = 0;
    let mut first_failure = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((theta_hat, se)) => records.push(RepRecord {
                rep: i + 1,
                theta_hat,
                se,
            }),
            Err(msg) => {
                failures += 1;
                first_failure.get_or_insert(format!("rep {}: {msg}", i + 1));
            }
        }
    }
    if records.is_empty() || failures as f64 > MAX_FAILURE_SHARE * cfg.reps as f64 {
        return Err(McError::TooManyFailures {
            failures,
            reps: cfg.reps,
            first: first_failure.unwrap_or_default(),
        });
    }
    let k = records.len() as f64;
    let mean = records.iter().map(|r| r.theta_hat).sum::<f64>() / k;
    let sd = if records.len() > 1 {
        (records.iter().map(|r| (r.theta_hat - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    let mean_se = records.iter().map(|r| r.se).sum::<f64>() / k;
    let studentized = records
        .iter()
        .map(|r| (r.theta_hat - target) / r.se)
        .collect();
    Ok(McSummary {
        config: cfg.clone(),
        method,
        reps_done: records.len(),
        failures,
        target,
        bias: mean - target,
        sd,
        mean_se,
        studentized,
        records,
        first_failure,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Studentized {
    pub values: Vec<f64>,
    /// Replications skipped because their standard error was zero.
    pub dropped: usize,
}

/// `(theta_hat_r - target) / se_r` for every stored replication.
pub fn studentize(summary: &McSummary) -> Studentized {
    let mut values = Vec::with_capacity(summary.records.len());
    let mut dropped = 0;
    for r in &summary.records {
        if r.se == 0.0 {
            dropped += 1;
        } else {
            values.push((r.theta_hat - summary.target) / r.se);
        }
    }
    Studentized { values, dropped }
}

/// Kolmogorov-Smirnov distance between the sample and N(0, 1).
pub fn ks_distance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 1.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Varying parameter of a bias grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridAxis {
    StrengthPairs(Vec<(f64, f64)>),
    QValues(Vec<usize>),
}

impl GridAxis {
    /// `(b1, b2)` pairs of the top panel.
    pub fn default_strengths() -> Self {
        GridAxis::StrengthPairs(vec![(0.8, 0.2), (0.6, 0.4), (0.5, 0.5), (0.4, 0.6), (0.2, 0.8)])
    }

    /// Sparsity levels of the bottom panel.
    pub fn default_q() -> Self {
        GridAxis::QValues(vec![1, 5, 10, 20, 50])
    }

    fn len(&self) -> usize {
        match self {
            GridAxis::StrengthPairs(v) => v.len(),
            GridAxis::QValues(v) => v.len(),
        }
    }

    pub fn header(&self) -> &'static str {
        match self {
            GridAxis::StrengthPairs(_) => "(b1, b2)",
            GridAxis::QValues(_) => "q",
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            GridAxis::StrengthPairs(v) => v.iter().map(|(a, b)| format!("({a}, {b})")).collect(),
            GridAxis::QValues(v) => v.iter().map(|q| q.to_string()).collect(),
        }
    }

    fn apply(&self, base: &ScenarioConfig, k: usize) -> ScenarioConfig {
        let mut cfg = base.clone();
        match self {
            GridAxis::StrengthPairs(v) => {
                cfg.b1 = v[k].0;
                cfg.b2 = v[k].1;
            }
            GridAxis::QValues(v) => cfg.q = v[k],
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub config: ScenarioConfig,
    pub summary: Option<McSummary>,
    pub error: Option<String>,
}

impl GridCell {
    pub fn bias(&self) -> Option<f64> {
        self.summary.as_ref().map(|s| s.bias)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub template: Template,
    pub cells: Vec<GridCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasGrid {
    pub axis: GridAxis,
    pub method: Method,
    pub rows: Vec<GridRow>,
}

impl BiasGrid {
    pub fn row(&self, template: Template) -> Option<&GridRow> {
        self.rows.iter().find(|r| r.template == template)
    }

    pub fn failed_cells(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .filter(|c| c.summary.is_none())
            .count()
    }
}

/// One scenario per (template, axis value); the template in `base` is
/// ignored. Cell seeds are derived from `base.seed` and the cell position.
pub fn bias_grid(
    base: &ScenarioConfig,
    axis: &GridAxis,
    method: Method,
    exec: Execution,
) -> Result<BiasGrid> {
    if axis.len() == 0 {
        return Err(McError::EmptyAxis);
    }
    if let GridAxis::StrengthPairs(pairs) = axis {
        if let Some(&(a, b)) = pairs
            .iter()
            .find(|(a, b)| !(*a > 0.0 && *a < 1.0 && *b > 0.0 && *b < 1.0))
        {
            return Err(McError::BadStrength(a, b));
        }
    }
    let opts = EstimatorOptions::default();
    let mut rows = Vec::with_capacity(Template::ALL.len());
    for (ti, template) in Template::ALL.into_iter().enumerate() {
        let mut cells = Vec::with_capacity(axis.len());
        for k in 0..axis.len() {
            let mut cfg = axis.apply(base, k);
            cfg.template = template;
            cfg.seed = derive_seed(base.seed, GRID_STREAM + (ti * axis.len() + k) as u64);
            let cell = match run_scenario_with(&cfg, method, &opts, exec) {
                Ok(summary) => GridCell {
                    config: cfg,
                    summary: Some(summary),
                    error: None,
                },
                Err(e) => GridCell {
                    config: cfg,
                    summary: None,
                    error: Some(e.to_string()),
                },
            };
            cells.push(cell);
        }
        rows.push(GridRow { template, cells });
    }
    Ok(BiasGrid {
        axis: axis.clone(),
        method,
        rows,
    })
}

/// Provenance attached to every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub seed: u64,
    pub reps: usize,
    pub lambda_rule: String,
    pub penalty_loadings: String,
    pub se_flavor: String,
    pub coefficient_split: String,
    pub confounding_strength: f64,
}

impl Metadata {
    pub fn new(seed: u64, reps: usize) -> Self {
        Metadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            reps,
            lambda_rule: format!(
                "plug-in: {PLUGIN_C} * sigma * Phi^-1(1 - gamma/(2p)) / sqrt(n), gamma = 0.1/ln(max(n,p)), sigma refined {PLUGIN_SIGMA_ITERATIONS}x from sd(y), first pass at {PLUGIN_FIRST_PASS_SCALE} x penalty"
            ),
            penalty_loadings: "uniform".to_string(),
            se_flavor: "HC1".to_string(),
            coefficient_split: "two-edge latent paths: sqrt(strength) per loading".to_string(),
            confounding_strength: CONFOUNDING_STRENGTH,
        }
    }

    fn csv_comment(&self) -> String {
        let value = serde_json::to_value(self).expect("metadata serializes");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        out
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Table layout: one row per template, one column per axis value, bias to
/// four decimals (`NA` for failed cells). Metadata leads as `#` lines.
pub fn grid_csv(grid: &BiasGrid, meta: &Metadata) -> String {
    let mut out = meta.csv_comment();
    out.push_str(&format!("# method: {}\n", grid.method));
    let mut header = vec![grid.axis.header().to_string()];
    header.extend(grid.axis.labels());
    out.push_str(&csv_line(&header));
    for row in &grid.rows {
        let mut fields = vec![row.template.label().to_string()];
        fields.extend(row.cells.iter().map(|c| match c.bias() {
            Some(b) => format!("{b:.4}"),
            None => "NA".to_string(),
        }));
        out.push_str(&csv_line(&fields));
    }
    out
}

/// Counts per bin of width [`HIST_WIDTH`] over `[HIST_LO, HIST_HI)`.
/// Values outside the range are reported in a trailing comment line.
pub fn histogram_csv(values: &[f64]) -> String {
    let bins = ((HIST_HI - HIST_LO) / HIST_WIDTH).round() as usize;
    let mut counts = vec![0usize; bins];
    let mut outside = 0;
    for &v in values {
        let pos = ((v - HIST_LO) / HIST_WIDTH).floor();
        if v.is_finite() && pos >= 0.0 && (pos as usize) < bins {
            counts[pos as usize] += 1;
        } else {
            outside += 1;
        }
    }
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (k, c) in counts.iter().enumerate() {
        let lo = HIST_LO + k as f64 * HIST_WIDTH;
        out.push_str(&format!("{lo},{},{c}\n", lo + HIST_WIDTH));
    }
    out.push_str(&format!("# outside: {outside}\n"));
    out
}

#[derive(Serialize)]
struct ScenarioDocument<'a> {
    metadata: &'a Metadata,
    summary: &'a McSummary,
}

pub fn scenario_json(summary: &McSummary) -> String {
    let meta = Metadata::new(summary.config.seed, summary.config.reps);
    serde_json::to_string_pretty(&ScenarioDocument {
        metadata: &meta,
        summary,
    })
    .expect("summary serializes")
}

/// Writes `scenario_<template>_<method>.json` and
/// `hist_<template>_<method>.csv` into `dir`.
pub fn write_scenario_artifacts(dir: &Path, summary: &McSummary) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let stem = format!("{}_{}", summary.config.template, summary.method);
    let json = dir.join(format!("scenario_{stem}.json"));
    fs::write(&json, scenario_json(summary))?;
    let hist = dir.join(format!("hist_{stem}.csv"));
    fs::write(&hist, histogram_csv(&summary.studentized))?;
    Ok(vec![json, hist])
}

/// Writes `<name>.csv` for the table layout of `grid`.
pub fn write_grid_artifact(dir: &Path, name: &str, grid: &BiasGrid, meta: &Metadata) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.csv"));
    fs::write(&path, grid_csv(grid, meta))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(template: Template, reps: usize) -> ScenarioConfig {
        ScenarioConfig {
            n: 60,
            p: 8,
            q: 2,
            reps,
            ..ScenarioConfig::baseline(template)
        }
    }

    #[test]
    fn single_replication_bias() {
        let cfg = quick(Template::GoodControl, 1);
        let s = run_scenario(&cfg, Method::DoubleSelection).unwrap();
        assert_eq!(s.reps_done, 1);
        assert_eq!(s.bias, s.records[0].theta_hat - s.target);
        assert_eq!(s.sd, 0.0);
    }

    #[test]
    fn deterministic_across_schedules() {
        let cfg = quick(Template::MGraph, 24);
        let opts = EstimatorOptions::default();
        let seq = run_scenario_with(&cfg, Method::NaiveLasso, &opts, Execution::Sequential).unwrap();
        let par = run_scenario_with(&cfg, Method::NaiveLasso, &opts, Execution::Parallel(Some(4))).unwrap();
        assert_eq!(seq, par);
        assert_eq!(scenario_json(&seq), scenario_json(&par));
    }

    #[test]
    fn bias_matches_stored_records() {
        let cfg = quick(Template::Mediator, 30);
        let s = run_scenario(&cfg, Method::PartiallingOut).unwrap();
        let mean = s.records.iter().map(|r| r.theta_hat).sum::<f64>() / s.records.len() as f64;
        assert_eq!(s.bias, mean - s.target);
        assert_eq!(s.studentized.len(), s.reps_done);
        assert_eq!(s.reps_done + s.failures, cfg.reps);
        let st = studentize(&s);
        assert_eq!(st.values, s.studentized);
        assert_eq!(st.dropped, 0);
    }

    #[test]
    fn targets_follow_template() {
        let med = LinearScm::from_template(&ScenarioConfig::baseline(Template::Mediator)).unwrap();
        assert_eq!(scenario_target(&med, Template::Mediator).unwrap(), 1.0);
        let cm = ScenarioConfig::baseline(Template::ConfoundedMediator);
        let cm = LinearScm::from_template(&cm).unwrap();
        assert_eq!(scenario_target(&cm, Template::ConfoundedMediator).unwrap(), 1.0);
        let gc = LinearScm::from_template(&ScenarioConfig::baseline(Template::GoodControl)).unwrap();
        assert!((scenario_target(&gc, Template::GoodControl).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn studentize_drops_zero_se() {
        let mut s = run_scenario(&quick(Template::GoodControl, 3), Method::OlsAll).unwrap();
        for r in &mut s.records {
            r.theta_hat = s.target;
        }
        assert!(studentize(&s).values.iter().all(|&v| v == 0.0));
        s.records[1].se = 0.0;
        let st = studentize(&s);
        assert_eq!(st.values.len(), 2);
        assert_eq!(st.dropped, 1);
    }

    #[test]
    fn too_many_failures_is_an_error() {
        // n = 9 is below the estimators' minimum, so every replication fails
        let cfg = ScenarioConfig { n: 9, ..quick(Template::GoodControl, 5) };
        assert!(matches!(
            run_scenario(&cfg, Method::DoubleSelection),
            Err(McError::TooManyFailures { failures: 5, .. })
        ));
    }

    #[test]
    fn grid_shape_and_csv() {
        let base = ScenarioConfig { reps: 3, ..quick(Template::GoodControl, 3) };
        let grid = bias_grid(
            &base,
            &GridAxis::StrengthPairs(vec![(0.8, 0.2), (0.5, 0.5)]),
            Method::DoubleSelection,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(grid.rows.len(), 4);
        assert!(grid.rows.iter().all(|r| r.cells.len() == 2));
        assert_eq!(grid.failed_cells(), 0);
        let csv = grid_csv(&grid, &Metadata::new(base.seed, base.reps));
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "\"(b1, b2)\",\"(0.8, 0.2)\",\"(0.5, 0.5)\"");
        assert!(body[1].starts_with("Good Control,"));
        assert_eq!(body.len(), 5);
        assert!(csv.contains("# confounding_strength: 0.5"));

        assert!(matches!(
            bias_grid(&base, &GridAxis::QValues(vec![]), Method::OlsAll, Execution::Sequential),
            Err(McError::EmptyAxis)
        ));
        assert!(matches!(
            bias_grid(
                &base,
                &GridAxis::StrengthPairs(vec![(1.2, 0.1)]),
                Method::OlsAll,
                Execution::Sequential
            ),
            Err(McError::BadStrength(..))
        ));
    }

    #[test]
    fn failed_cell_is_marked() {
        let base = ScenarioConfig { reps: 2, ..quick(Template::GoodControl, 2) };
        // q = 9 exceeds p = 8
        let grid = bias_grid(&base, &GridAxis::QValues(vec![1, 9]), Method::OlsAll, Execution::Sequential)
            .unwrap();
        assert_eq!(grid.failed_cells(), 4);
        let csv = grid_csv(&grid, &Metadata::new(1, 2));
        assert!(csv.lines().any(|l| l.ends_with(",NA")));
    }

    #[test]
    fn histogram_bins() {
        let csv = histogram_csv(&[-5.0, -4.9, 0.0, 0.1, 4.99, 5.0, -7.0]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "bin_lo,bin_hi,count");
        assert_eq!(lines.len(), 1 + 40 + 1);
        assert_eq!(lines[1], "-5,-4.75,2");
        assert_eq!(lines[21], "0,0.25,2");
        assert_eq!(lines[40], "4.75,5,1");
        assert_eq!(lines[41], "# outside: 2");
    }

    #[test]
    fn ks_distance_basics() {
        assert_eq!(ks_distance(&[]), 1.0);
        assert!((ks_distance(&[0.0]) - 0.5).abs() < 1e-12);
        // evenly spaced normal quantiles sit within 1/n of the cdf
        let normal = Normal::standard();
        let n = 400;
        let q: Vec<f64> = (0..n)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
            .collect();
        assert!(ks_distance(&q) <= 0.5 / n as f64 + 1e-9);
    }

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (1..1000).map(|r| derive_seed(42, r)).collect();
        assert_eq!(seeds.len(), 999);
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }
}
