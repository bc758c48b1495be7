//! Linear-Gaussian structural causal models.
//!
//! Holds the four scenario templates, exact population quantities derived
//! from the implied covariance, and seeded simulation.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CausalGraph, GraphBuilder, GraphError};

/// Strength of the extra `Xj <-> Y` arc in the confounded-mediator template.
pub const CONFOUNDING_STRENGTH: f64 = 0.5;

#[derive(Debug, Error)]
pub enum ScmError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("regressor covariance is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, ScmError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    GoodControl,
    MGraph,
    Mediator,
    ConfoundedMediator,
}

impl Template {
    pub const ALL: [Template; 4] = [
        Template::GoodControl,
        Template::MGraph,
        Template::Mediator,
        Template::ConfoundedMediator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::GoodControl => "good_control",
            Template::MGraph => "m_graph",
            Template::Mediator => "mediator",
            Template::ConfoundedMediator => "confounded_mediator",
        }
    }

    /// Row label used in bias tables.
    pub fn label(self) -> &'static str {
        match self {
            Template::GoodControl => "Good Control",
            Template::MGraph => "M-graph",
            Template::Mediator => "Mediator",
            Template::ConfoundedMediator => "Confounded Mediator",
        }
    }

    /// Mediator templates are scored against the direct effect.
    pub fn targets_direct_effect(self) -> bool {
        matches!(self, Template::Mediator | Template::ConfoundedMediator)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Template {
    type Err = ScmError;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                ScmError::InvalidConfig(format!(
                    "unknown template `{s}`; valid templates: good_control, m_graph, mediator, confounded_mediator"
                ))
            })
    }
}

/// One simulation scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub template: Template,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub b1: f64,
    pub b2: f64,
    pub theta0: f64,
    pub reps: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    /// n = p = 100, q = 10, (b1, b2) = (0.8, 0.2), theta0 = 1, 1000 reps.
    pub fn baseline(template: Template) -> Self {
        ScenarioConfig {
            template,
            n: 100,
            p: 100,
            q: 10,
            b1: 0.8,
            b2: 0.2,
            theta0: 1.0,
            reps: 1000,
            seed: 20_240_101,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ScmError::InvalidConfig(m));
        if self.q < 1 || self.q > self.p {
            return bad(format!("need 1 <= q <= p, got q={} p={}", self.q, self.p));
        }
        if self.n < 2 {
            return bad(format!("need n >= 2, got {}", self.n));
        }
        if self.reps < 1 {
            return bad("need reps >= 1".into());
        }
        for (name, b) in [("b1", self.b1), ("b2", self.b2)] {
            if !(b > -1.0 && b < 1.0) || b == 0.0 {
                return bad(format!("{name} must lie in (-1, 1) without 0, got {b}"));
            }
        }
        if self.template == Template::MGraph && (self.b1 < 0.0 || self.b2 < 0.0) {
            return bad("m_graph path strengths must be positive for the square-root split".into());
        }
        if !self.theta0.is_finite() {
            return bad("theta0 must be finite".into());
        }
        Ok(())
    }
}

/// Observed sample of one simulated or loaded study.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub y: DVector<f64>,
    pub d: DVector<f64>,
    pub x: DMatrix<f64>,
    pub control_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        y: DVector<f64>,
        d: DVector<f64>,
        x: DMatrix<f64>,
        control_names: Vec<String>,
    ) -> Result<Self> {
        let n = y.len();
        if d.len() != n || x.nrows() != n || x.ncols() != control_names.len() {
            return Err(ScmError::InvalidModel(format!(
                "inconsistent dimensions: y={} d={} X={}x{} names={}",
                n,
                d.len(),
                x.nrows(),
                x.ncols(),
                control_names.len()
            )));
        }
        if y.iter().chain(d.iter()).chain(x.iter()).any(|v| !v.is_finite()) {
            return Err(ScmError::InvalidModel("non-finite entry in dataset".into()));
        }
        Ok(Dataset {
            y,
            d,
            x,
            control_names,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }
}

/// A causal graph with structural coefficients and Gaussian disturbances.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearScm {
    graph: CausalGraph,
    // aligned with graph.directed_edges()
    coeff: Vec<f64>,
    // aligned with graph.bidirected_edges(): loading on (lo, hi) endpoint
    latent_coeff: Vec<(f64, f64)>,
    noise_var: Vec<f64>,
    treatment: String,
    outcome: String,
}

impl LinearScm {
    /// `coeff` follows `graph.directed_edges()`, `latent_coeff` follows
    /// `graph.bidirected_edges()` as loadings on the (lower, higher) index
    /// endpoint, and `noise_var` follows `graph.nodes()`.
    pub fn new(
        graph: CausalGraph,
        coeff: Vec<f64>,
        latent_coeff: Vec<(f64, f64)>,
        noise_var: Vec<f64>,
        treatment: &str,
        outcome: &str,
    ) -> Result<Self> {
        if coeff.len() != graph.directed_edges().len() {
            return Err(ScmError::InvalidModel(
                "one coefficient per directed edge required".into(),
            ));
        }
        if latent_coeff.len() != graph.bidirected_edges().len() {
            return Err(ScmError::InvalidModel(
                "two loadings per bidirected arc required".into(),
            ));
        }
        if noise_var.len() != graph.len() || noise_var.iter().any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(ScmError::InvalidModel(
                "one positive noise variance per node required".into(),
            ));
        }
        if coeff
            .iter()
            .chain(latent_coeff.iter().flat_map(|(a, b)| [a, b]))
            .any(|c| !c.is_finite())
        {
            return Err(ScmError::InvalidModel("non-finite coefficient".into()));
        }
        let (t, o) = (graph.index_of(treatment)?, graph.index_of(outcome)?);
        if t == o {
            return Err(ScmError::InvalidModel(
                "treatment and outcome must differ".into(),
            ));
        }
        Ok(LinearScm {
            graph,
            coeff,
            latent_coeff,
            noise_var,
            treatment: treatment.to_string(),
            outcome: outcome.to_string(),
        })
    }

    /// Builds the scenario model on nodes `D, Y, X1..Xp`.
    ///
    /// Single-edge paths carry their strength as the coefficient; two-edge
    /// paths (the latent arcs) split it symmetrically as `sqrt(strength)` per
    /// loading.
    pub fn from_template(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        Self::build_template(cfg.template, cfg.p, cfg.q, cfg.b1, cfg.b2, cfg.theta0)
    }

    /// Like [`LinearScm::from_template`] but without scenario validation, so
    /// `q = 0` (all controls isolated) is representable.
    pub fn build_template(
        template: Template,
        p: usize,
        q: usize,
        b1: f64,
        b2: f64,
        theta0: f64,
    ) -> Result<Self> {
        if q > p {
            return Err(ScmError::InvalidConfig(format!("q={q} exceeds p={p}")));
        }
        let mut builder = GraphBuilder::new().node("D").node("Y");
        let names: Vec<String> = (1..=p).map(|j| format!("X{j}")).collect();
        for name in &names {
            builder = builder.node(name);
        }
        let mut coeffs = vec![theta0];
        builder = builder.edge("D", "Y");
        // loadings are recorded against (X, other) and reordered below
        let mut arcs: Vec<(String, String, f64, f64)> = Vec::new();
        for x in names.iter().take(q) {
            match template {
                Template::GoodControl => {
                    builder = builder.edge(x, "D").edge(x, "Y");
                    coeffs.extend([b1, b2]);
                }
                Template::MGraph => {
                    let (l1, l2) = (b1.sqrt(), b2.sqrt());
                    builder = builder.arc(x, "D").arc(x, "Y");
                    arcs.push((x.clone(), "D".into(), l1, l1));
                    arcs.push((x.clone(), "Y".into(), l2, l2));
                }
                Template::Mediator | Template::ConfoundedMediator => {
                    builder = builder.edge("D", x).edge(x, "Y");
                    coeffs.extend([b1, b2]);
                    if template == Template::ConfoundedMediator {
                        let l = CONFOUNDING_STRENGTH.sqrt();
                        builder = builder.arc(x, "Y");
                        arcs.push((x.clone(), "Y".into(), l, l));
                    }
                }
            }
        }
        let graph = builder.build()?;
        let mut latent = Vec::with_capacity(arcs.len());
        for (a, b, la, lb) in arcs {
            let (ia, ib) = (graph.index_of(&a)?, graph.index_of(&b)?);
            latent.push(if ia < ib { (la, lb) } else { (lb, la) });
        }
        let noise = vec![1.0; graph.len()];
        LinearScm::new(graph, coeffs, latent, noise, "D", "Y")
    }

    pub fn graph(&self) -> &CausalGraph {
        &self.graph
    }

    pub fn treatment(&self) -> &str {
        &self.treatment
    }

    pub fn outcome(&self) -> &str {
        &self.outcome
    }

    pub fn noise_var(&self) -> &[f64] {
        &self.noise_var
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeff
    }

    pub fn latent_loadings(&self) -> &[(f64, f64)] {
        &self.latent_coeff
    }

    /// Observed nodes other than treatment and outcome, in node order.
    pub fn control_names(&self) -> Vec<String> {
        self.graph
            .nodes()
            .iter()
            .filter(|n| **n != self.treatment && **n != self.outcome)
            .cloned()
            .collect()
    }

    fn n_sources(&self) -> usize {
        self.graph.len() + self.latent_coeff.len()
    }

    /// Reduced-form loadings: row v gives node v as a linear combination of
    /// the exogenous sources (node disturbances, then one latent per arc).
    fn reduced_form(&self) -> DMatrix<f64> {
        let n = self.graph.len();
        let mut a = DMatrix::<f64>::zeros(n, self.n_sources());
        let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(from, to), &c) in self.graph.directed_edges().iter().zip(&self.coeff) {
            incoming[to].push((from, c));
        }
        for v in self.graph.topological_order() {
            a[(v, v)] = 1.0;
            for &(parent, c) in &incoming[v] {
                for k in 0..a.ncols() {
                    let contribution = c * a[(parent, k)];
                    a[(v, k)] += contribution;
                }
            }
            for (k, (&(lo, hi), &(l_lo, l_hi))) in self
                .graph
                .bidirected_edges()
                .iter()
                .zip(&self.latent_coeff)
                .enumerate()
            {
                if lo == v {
                    a[(v, n + k)] += l_lo;
                } else if hi == v {
                    a[(v, n + k)] += l_hi;
                }
            }
        }
        a
    }

    fn source_variances(&self) -> DVector<f64> {
        let mut v = DVector::from_element(self.n_sources(), 1.0);
        for (i, &s) in self.noise_var.iter().enumerate() {
            v[i] = s;
        }
        v
    }

    /// Covariance of the observed nodes, indexed in `graph().nodes()` order.
    pub fn implied_covariance(&self) -> DMatrix<f64> {
        let a = self.reduced_form();
        let var = self.source_variances();
        let scaled = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * var[j]);
        let sigma = &scaled * a.transpose();
        // exact symmetry
        DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |i, j| {
            0.5 * (sigma[(i, j)] + sigma[(j, i)])
        })
    }

    /// Entry `(y, d)` of `(I - B)^{-1}` over observed structural coefficients.
    pub fn total_effect(&self, d: &str, y: &str) -> Result<f64> {
        let (di, yi) = (self.graph.index_of(d)?, self.graph.index_of(y)?);
        if di == yi {
            return Err(ScmError::InvalidModel("d and y must differ".into()));
        }
        Ok(self.reduced_form()[(yi, di)])
    }

    /// Coefficient on the edge `d -> y`, zero when absent.
    pub fn direct_effect(&self, d: &str, y: &str) -> Result<f64> {
        let (di, yi) = (self.graph.index_of(d)?, self.graph.index_of(y)?);
        Ok(self
            .graph
            .directed_edges()
            .iter()
            .zip(&self.coeff)
            .find(|(&e, _)| e == (di, yi))
            .map(|(_, &c)| c)
            .unwrap_or(0.0))
    }

    /// Population regression of `target` on `regressors` from the implied
    /// covariance. Coefficients follow the order of `regressors`.
    pub fn population_ols(&self, target: &str, regressors: &[&str]) -> Result<Vec<f64>> {
        let ti = self.graph.index_of(target)?;
        let ri: Vec<usize> = regressors
            .iter()
            .map(|r| self.graph.index_of(r))
            .collect::<std::result::Result<_, _>>()?;
        if ri.is_empty() {
            return Err(ScmError::InvalidModel("regressor set is empty".into()));
        }
        if ri.contains(&ti) {
            return Err(ScmError::InvalidModel(format!(
                "target `{target}` listed among regressors"
            )));
        }
        let sigma = self.implied_covariance();
        Self::solve_normal_equations(&sigma, ti, &ri)
    }

    pub(crate) fn solve_normal_equations(
        sigma: &DMatrix<f64>,
        target: usize,
        regressors: &[usize],
    ) -> Result<Vec<f64>> {
        let k = regressors.len();
        let sxx = DMatrix::from_fn(k, k, |i, j| sigma[(regressors[i], regressors[j])]);
        let sxy = DVector::from_fn(k, |i, _| sigma[(regressors[i], target)]);
        let chol = sxx.cholesky().ok_or(ScmError::Singular)?;
        Ok(chol.solve(&sxy).iter().copied().collect())
    }

    /// Linear-Gaussian adjustment formula: the coefficient on `d` when `y` is
    /// regressed on `d` and `z`.
    pub fn adjustment_effect(&self, d: &str, y: &str, z: &[&str]) -> Result<f64> {
        if z.contains(&d) || z.contains(&y) {
            return Err(ScmError::InvalidModel(
                "adjustment set must exclude d and y".into(),
            ));
        }
        let mut regs = vec![d];
        regs.extend_from_slice(z);
        Ok(self.population_ols(y, &regs)?[0])
    }

    /// Draws every observed node for `n` observations, returned `n x nodes`
    /// in `graph().nodes()` order.
    ///
    /// Source `k` (node disturbance or latent) reads its own ChaCha stream
    /// keyed by `(seed, k)`; observation `i` is the `i`-th draw of that
    /// stream, so output does not depend on evaluation order.
    pub fn simulate_nodes(&self, n: usize, seed: u64) -> DMatrix<f64> {
        let m = self.graph.len();
        let sources = self.n_sources();
        let var = self.source_variances();
        let mut shocks = DMatrix::<f64>::zeros(n, sources);
        for k in 0..sources {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let sd = var[k].sqrt();
            for i in 0..n {
                let z: f64 = StandardNormal.sample(&mut rng);
                shocks[(i, k)] = sd * z;
            }
        }
        let mut out = DMatrix::<f64>::zeros(n, m);
        let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for (&(from, to), &c) in self.graph.directed_edges().iter().zip(&self.coeff) {
            incoming[to].push((from, c));
        }
        let mut latent_in: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for (k, (&(lo, hi), &(l_lo, l_hi))) in self
            .graph
            .bidirected_edges()
            .iter()
            .zip(&self.latent_coeff)
            .enumerate()
        {
            latent_in[lo].push((m + k, l_lo));
            latent_in[hi].push((m + k, l_hi));
        }
        for v in self.graph.topological_order() {
            let mut col = shocks.column(v).clone_owned();
            for &(src, l) in &latent_in[v] {
                col.axpy(l, &shocks.column(src), 1.0);
            }
            for &(parent, c) in &incoming[v] {
                col.axpy(c, &out.column(parent), 1.0);
            }
            out.set_column(v, &col);
        }
        out
    }

    /// Simulates a dataset; identical `(self, n, seed)` give identical output.
    pub fn simulate(&self, n: usize, seed: u64) -> Dataset {
        let all = self.simulate_nodes(n, seed);
        let ti = self.graph.index_of(&self.treatment).expect("validated");
        let oi = self.graph.index_of(&self.outcome).expect("validated");
        let controls: Vec<usize> = (0..self.graph.len())
            .filter(|&v| v != ti && v != oi)
            .collect();
        let x = DMatrix::from_fn(n, controls.len(), |i, j| all[(i, controls[j])]);
        Dataset {
            y: all.column(oi).clone_owned(),
            d: all.column(ti).clone_owned(),
            x,
            control_names: self.control_names(),
        }
    }

    /// Coefficient table as CSV with header `from,to,kind,value`.
    ///
    /// Directed edges use kind `directed`; each bidirected arc contributes two
    /// `latent` rows, one per endpoint loading, with `from` naming the arc.
    pub fn coefficient_csv(&self) -> String {
        let mut out = String::from("from,to,kind,value\n");
        let names = self.graph.nodes();
        for (&(a, b), c) in self.graph.directed_edges().iter().zip(&self.coeff) {
            out.push_str(&format!("{},{},directed,{}\n", names[a], names[b], c));
        }
        for (&(a, b), &(la, lb)) in self.graph.bidirected_edges().iter().zip(&self.latent_coeff) {
            let arc = format!("{}<->{}", names[a], names[b]);
            out.push_str(&format!("{arc},{},latent,{la}\n", names[a]));
            out.push_str(&format!("{arc},{},latent,{lb}\n", names[b]));
        }
        for (name, v) in names.iter().zip(&self.noise_var) {
            out.push_str(&format!("{name},{name},noise_var,{v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small(template: Template) -> LinearScm {
        LinearScm::build_template(template, 1, 1, 0.8, 0.2, 1.0).unwrap()
    }

    #[test]
    fn empty_graph_is_identity() {
        let g = GraphBuilder::new().node("D").node("Y").node("Z").build().unwrap();
        let scm = LinearScm::new(g, vec![], vec![], vec![1.0; 3], "D", "Y").unwrap();
        assert_eq!(scm.implied_covariance(), DMatrix::identity(3, 3));
        assert_eq!(scm.total_effect("D", "Y").unwrap(), 0.0);
        assert_eq!(scm.direct_effect("D", "Y").unwrap(), 0.0);
    }

    #[test]
    fn single_edge_covariance() {
        let g = GraphBuilder::new().edge("D", "Y").build().unwrap();
        let scm = LinearScm::new(g, vec![1.0], vec![], vec![1.0; 2], "D", "Y").unwrap();
        let s = scm.implied_covariance();
        assert_abs_diff_eq!(s[(1, 1)], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(0, 1)], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn good_control_covariance_and_ols() {
        let scm = small(Template::GoodControl);
        let s = scm.implied_covariance();
        assert_abs_diff_eq!(s[(0, 0)], 1.64, epsilon = 1e-12);
        assert_abs_diff_eq!(s[(0, 1)], 1.80, epsilon = 1e-12);
        let b = scm.population_ols("Y", &["D"]).unwrap();
        assert_abs_diff_eq!(b[0], 1.80 / 1.64, epsilon = 1e-12);
        let b = scm.population_ols("Y", &["D", "X1"]).unwrap();
        assert_abs_diff_eq!(b[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[1], 0.2, epsilon = 1e-12);
    }

    #[test]
    fn template_coefficients() {
        let cfg = ScenarioConfig {
            q: 1,
            p: 1,
            b1: 0.81,
            ..ScenarioConfig::baseline(Template::MGraph)
        };
        let scm = LinearScm::from_template(&cfg).unwrap();
        let (la, lb) = scm.latent_loadings()[0];
        assert_abs_diff_eq!(la, 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(lb, 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(la * lb, 0.81, epsilon = 1e-15);
        for t in Template::ALL {
            let scm = LinearScm::from_template(&ScenarioConfig::baseline(t)).unwrap();
            assert_eq!(scm.direct_effect("D", "Y").unwrap(), 1.0);
        }
        let gc = small(Template::GoodControl);
        let x = gc.graph().index_of("X1").unwrap();
        let d = gc.graph().index_of("D").unwrap();
        assert!(gc.graph().has_directed(x, d));
        let pos = gc.graph().directed_edges().iter().position(|&e| e == (x, d)).unwrap();
        assert_eq!(gc.coefficients()[pos], 0.8);
    }

    #[test]
    fn effects_on_templates() {
        let gc = LinearScm::from_template(&ScenarioConfig::baseline(Template::GoodControl)).unwrap();
        assert_abs_diff_eq!(gc.total_effect("D", "Y").unwrap(), 1.0, epsilon = 1e-12);
        let med = LinearScm::from_template(&ScenarioConfig::baseline(Template::Mediator)).unwrap();
        assert_abs_diff_eq!(med.total_effect("D", "Y").unwrap(), 2.6, epsilon = 1e-12);
        assert_eq!(med.direct_effect("D", "Y").unwrap(), 1.0);
        assert_eq!(med.direct_effect("Y", "D").unwrap(), 0.0);
        assert_eq!(med.total_effect("Y", "D").unwrap(), 0.0);
    }

    #[test]
    fn m_graph_collider_bias() {
        let mg = small(Template::MGraph);
        assert_abs_diff_eq!(mg.adjustment_effect("D", "Y", &[]).unwrap(), 1.0, epsilon = 1e-12);
        let biased = mg.adjustment_effect("D", "Y", &["X1"]).unwrap();
        // closed form: Var(D)=1.8, Var(X)=2, Cov(D,X)=0.8, Cov(X,Y)=0.8+0.2,
        // Cov(D,Y)=1.8 -> beta_D = (1.8*2 - 0.8*1.0) / (1.8*2 - 0.64)
        let expect = (1.8 * 2.0 - 0.8 * 1.0) / (1.8 * 2.0 - 0.64);
        assert_abs_diff_eq!(biased, expect, epsilon = 1e-12);
        assert!(biased < 1.0);
    }

    #[test]
    fn population_ols_errors() {
        let scm = small(Template::GoodControl);
        assert!(matches!(scm.population_ols("Y", &[]), Err(ScmError::InvalidModel(_))));
        assert!(matches!(scm.population_ols("Y", &["Y"]), Err(ScmError::InvalidModel(_))));
        assert!(matches!(scm.population_ols("Y", &["Q"]), Err(ScmError::Graph(_))));
        // Y and D are perfectly collinear when the outcome is noiseless
        let g = GraphBuilder::new().edge("D", "Y").node("Z").build().unwrap();
        let scm = LinearScm::new(g, vec![1.0], vec![], vec![1.0, 1e-300, 1.0], "D", "Y").unwrap();
        assert!(matches!(scm.population_ols("Z", &["D", "Y"]), Err(ScmError::Singular)));
    }

    #[test]
    fn simulate_is_deterministic() {
        let scm = LinearScm::from_template(&ScenarioConfig::baseline(Template::MGraph)).unwrap();
        let a = scm.simulate(50, 7);
        let b = scm.simulate(50, 7);
        assert_eq!(a, b);
        assert_ne!(a, scm.simulate(50, 8));
        assert_eq!(a.p(), 100);
        assert_eq!(a.control_names[0], "X1");
    }

    #[test]
    fn config_validation() {
        let mut cfg = ScenarioConfig::baseline(Template::GoodControl);
        assert!(cfg.validate().is_ok());
        cfg.q = 0;
        assert!(cfg.validate().is_err());
        cfg.q = 101;
        assert!(cfg.validate().is_err());
        cfg = ScenarioConfig { b1: 0.0, ..ScenarioConfig::baseline(Template::GoodControl) };
        assert!(cfg.validate().is_err());
        cfg = ScenarioConfig { b2: 1.0, ..ScenarioConfig::baseline(Template::GoodControl) };
        assert!(cfg.validate().is_err());
        cfg = ScenarioConfig { n: 1, ..ScenarioConfig::baseline(Template::GoodControl) };
        assert!(cfg.validate().is_err());
        cfg = ScenarioConfig { reps: 0, ..ScenarioConfig::baseline(Template::GoodControl) };
        assert!(cfg.validate().is_err());
        assert!("nonsense".parse::<Template>().is_err());
        assert_eq!("m_graph".parse::<Template>().unwrap(), Template::MGraph);
    }

    #[test]
    fn config_json_is_flat() {
        let cfg = ScenarioConfig::baseline(Template::ConfoundedMediator);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"template\":\"confounded_mediator\""));
        let back: ScenarioConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn coefficient_table() {
        let csv = small(Template::ConfoundedMediator).coefficient_csv();
        assert!(csv.starts_with("from,to,kind,value\n"));
        assert!(csv.contains("D,Y,directed,1\n"));
        assert!(csv.contains("D,X1,directed,0.8\n"));
        assert_eq!(csv.matches(",latent,").count(), 2);
    }
}
