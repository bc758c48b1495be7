//! Treatment-effect estimators on a [`Dataset`]: full OLS, naive post-LASSO,
//! double selection and partialling out, plus a numerical probe of the
//! first-order nuisance sensitivity of the orthogonal and naive scores.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::regress::{self, lasso_cd_with, ols, plugin_select, LassoOptions, RegressError};
use crate::scm::{Dataset, LinearScm, ScmError};

/// Smallest sample the penalized estimators accept.
pub const MIN_OBSERVATIONS: usize = 10;

#[derive(Debug, Error)]
pub enum DmlError {
    #[error("need at least {MIN_OBSERVATIONS} observations, got {0}")]
    TooFewObservations(usize),
    #[error("{0} has zero variance")]
    ZeroVariance(&'static str),
    #[error("design column `{0}` is collinear with earlier columns")]
    Singular(String),
    #[error("refit infeasible: {selected} selected controls with n = {n}")]
    RefitInfeasible { selected: usize, n: usize },
    #[error(transparent)]
    Regress(RegressError),
    #[error(transparent)]
    Scm(#[from] ScmError),
    #[error("epsilon must lie in (0, 0.5], got {0}")]
    BadStep(f64),
}

pub type Result<T> = std::result::Result<T, DmlError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    OlsAll,
    NaiveLasso,
    DoubleSelection,
    PartiallingOut,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::OlsAll,
        Method::NaiveLasso,
        Method::DoubleSelection,
        Method::PartiallingOut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::OlsAll => "ols_all",
            Method::NaiveLasso => "naive_lasso",
            Method::DoubleSelection => "double_selection",
            Method::PartiallingOut => "partialling_out",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown method `{s}`; valid methods: ols_all, naive_lasso, double_selection, partialling_out"
                )
            })
    }
}

/// How the LASSO steps choose their penalty.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PenaltyRule {
    /// Plug-in level with iterated noise estimate.
    #[default]
    Plugin,
    /// A fixed level on the standardized scale (0 gives unpenalized fits).
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EstimatorOptions {
    pub penalty: PenaltyRule,
}

/// Penalty levels used by the selection steps; `None` when a step did not run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LambdaRecord {
    pub outcome: Option<f64>,
    pub treatment: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub method: Method,
    pub theta_hat: f64,
    pub se: f64,
    pub selected_controls: Vec<String>,
    pub lambda_used: LambdaRecord,
}

/// Runs `method` with default options.
pub fn estimate(data: &Dataset, method: Method) -> Result<FitResult> {
    estimate_with(data, method, &EstimatorOptions::default())
}

pub fn estimate_with(data: &Dataset, method: Method, opts: &EstimatorOptions) -> Result<FitResult> {
    match method {
        Method::OlsAll => ols_all(data),
        Method::NaiveLasso => naive_post_lasso_with(data, opts),
        Method::DoubleSelection => double_selection_with(data, opts),
        Method::PartiallingOut => partialling_out_with(data, opts),
    }
}

fn check_sample(data: &Dataset) -> Result<()> {
    if data.n() < MIN_OBSERVATIONS {
        return Err(DmlError::TooFewObservations(data.n()));
    }
    if variance(&data.y) <= 0.0 {
        return Err(DmlError::ZeroVariance("outcome"));
    }
    if variance(&data.d) <= 0.0 {
        return Err(DmlError::ZeroVariance("treatment"));
    }
    Ok(())
}

fn variance(v: &DVector<f64>) -> f64 {
    let m = v.mean();
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
}

/// Design `[1, d, X_S]`.
fn treatment_design(data: &Dataset, support: &[usize]) -> DMatrix<f64> {
    let n = data.n();
    let mut m = DMatrix::from_element(n, support.len() + 2, 1.0);
    m.set_column(1, &data.d);
    for (k, &j) in support.iter().enumerate() {
        m.set_column(k + 2, &data.x.column(j));
    }
    m
}

/// Fits `[1, d, X_S]` and reads off the treatment coefficient.
fn refit(data: &Dataset, support: &[usize], method: Method, lambda: LambdaRecord) -> Result<FitResult> {
    let n = data.n();
    if support.len() + 2 >= n {
        return Err(DmlError::RefitInfeasible {
            selected: support.len(),
            n,
        });
    }
    let design = treatment_design(data, support);
    let fit = ols(&design, &data.y).map_err(|e| named_error(e, data, support))?;
    Ok(FitResult {
        method,
        theta_hat: fit.coefficients[1],
        se: fit.standard_errors[1],
        selected_controls: support.iter().map(|&j| data.control_names[j].clone()).collect(),
        lambda_used: lambda,
    })
}

fn named_error(e: RegressError, data: &Dataset, support: &[usize]) -> DmlError {
    match e {
        RegressError::Singular { column } => DmlError::Singular(match column {
            0 => "(intercept)".to_string(),
            1 => "treatment".to_string(),
            c => data.control_names[support[c - 2]].clone(),
        }),
        other => DmlError::Regress(other),
    }
}

/// LASSO selection of `target` on `design`; returns (support, lambda).
fn select(
    design: &DMatrix<f64>,
    target: &DVector<f64>,
    unpenalized: &[usize],
    rule: PenaltyRule,
) -> Result<(Vec<usize>, f64)> {
    let fit = match rule {
        PenaltyRule::Plugin => plugin_select(design, target, unpenalized)
            .map_err(DmlError::Regress)?
            .fit,
        PenaltyRule::Fixed(lambda) => {
            let opts = LassoOptions {
                unpenalized: unpenalized.to_vec(),
                ..LassoOptions::default()
            };
            lasso_cd_with(design, target, lambda, &opts).map_err(DmlError::Regress)?
        }
    };
    Ok((fit.active_set, fit.lambda))
}

/// OLS of `y` on `d` and every control.
pub fn ols_all(data: &Dataset) -> Result<FitResult> {
    let all: Vec<usize> = (0..data.p()).collect();
    refit(data, &all, Method::OlsAll, LambdaRecord::default())
}

/// LASSO of `y` on `(d, X)` with `d` unpenalized, then OLS of `y` on `d`
/// and the selected controls.
pub fn naive_post_lasso(data: &Dataset) -> Result<FitResult> {
    naive_post_lasso_with(data, &EstimatorOptions::default())
}

pub fn naive_post_lasso_with(data: &Dataset, opts: &EstimatorOptions) -> Result<FitResult> {
    check_sample(data)?;
    let n = data.n();
    let mut design = DMatrix::zeros(n, data.p() + 1);
    design.set_column(0, &data.d);
    design.columns_mut(1, data.p()).copy_from(&data.x);
    let (active, lambda) = select(&design, &data.y, &[0], opts.penalty)?;
    let support: Vec<usize> = active.into_iter().filter(|&j| j > 0).map(|j| j - 1).collect();
    let record = LambdaRecord {
        outcome: Some(lambda),
        treatment: None,
    };
    refit(data, &support, Method::NaiveLasso, record)
}

/// Selects predictors of `y` and of `d` separately and refits `y` on `d`
/// plus the union.
pub fn double_selection(data: &Dataset) -> Result<FitResult> {
    double_selection_with(data, &EstimatorOptions::default())
}

pub fn double_selection_with(data: &Dataset, opts: &EstimatorOptions) -> Result<FitResult> {
    check_sample(data)?;
    let mut record = LambdaRecord::default();
    let mut union = Vec::new();
    if data.p() > 0 {
        let (sy, ly) = select(&data.x, &data.y, &[], opts.penalty)?;
        let (sd, ld) = select(&data.x, &data.d, &[], opts.penalty)?;
        record = LambdaRecord {
            outcome: Some(ly),
            treatment: Some(ld),
        };
        union = sy;
        union.extend(sd);
        union.sort_unstable();
        union.dedup();
    }
    refit(data, &union, Method::DoubleSelection, record)
}

/// Residualizes `y` and `d` on the controls by LASSO + post-LASSO and
/// regresses one residual on the other.
pub fn partialling_out(data: &Dataset) -> Result<FitResult> {
    partialling_out_with(data, &EstimatorOptions::default())
}

pub fn partialling_out_with(data: &Dataset, opts: &EstimatorOptions) -> Result<FitResult> {
    check_sample(data)?;
    let mut record = LambdaRecord::default();
    let residualize = |target: &DVector<f64>| -> Result<(DVector<f64>, Vec<usize>, Option<f64>)> {
        if data.p() == 0 {
            let m = target.mean();
            return Ok((target.map(|v| v - m), Vec::new(), None));
        }
        let (support, lambda) = select(&data.x, target, &[], opts.penalty)?;
        let fit = regress::post_lasso(&data.x, target, &support).map_err(|e| match e {
            RegressError::Singular { column } if column > 0 => {
                DmlError::Singular(data.control_names[support[column - 1]].clone())
            }
            other => DmlError::Regress(other),
        })?;
        Ok((fit.residuals, support, Some(lambda)))
    };
    let (rho_y, sy, ly) = residualize(&data.y)?;
    let (rho_d, sd, ld) = residualize(&data.d)?;
    record.outcome = ly;
    record.treatment = ld;
    if rho_d.norm_squared() <= 1e-12 * data.d.norm_squared().max(f64::MIN_POSITIVE) {
        return Err(DmlError::ZeroVariance("treatment residual"));
    }
    let design = DMatrix::from_column_slice(data.n(), 1, rho_d.as_slice());
    let fit = ols(&design, &rho_y).map_err(DmlError::Regress)?;
    let mut selected = sy;
    selected.extend(sd);
    selected.sort_unstable();
    selected.dedup();
    Ok(FitResult {
        method: Method::PartiallingOut,
        theta_hat: fit.coefficients[0],
        se: fit.standard_errors[0],
        selected_controls: selected
            .into_iter()
            .map(|j| data.control_names[j].clone())
            .collect(),
        lambda_used: record,
    })
}

/// Central-difference Gateaux derivatives of two empirical moments along the
/// nuisance direction that scales the true conditional means by `1 +/- eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityProbe {
    /// Orthogonal score `(rho_y - theta rho_d) rho_d`.
    pub dml_deriv: f64,
    /// Non-orthogonal score `(y - theta d - g(x)) d`.
    pub naive_deriv: f64,
}

/// Evaluates both derivatives at the true nuisance functions of `scm`,
/// which must be the model that generated `data`.
///
/// The conditional means `E[d|x]` and `E[y|x]` are the population
/// regressions implied by the model, `theta` is the structural `d -> y`
/// coefficient and `g = E[y|x] - theta E[d|x]`.
pub fn orthogonality_derivative(
    scm: &LinearScm,
    data: &Dataset,
    epsilon: f64,
) -> Result<OrthogonalityProbe> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(DmlError::BadStep(epsilon));
    }
    let theta = scm.direct_effect(scm.treatment(), scm.outcome())?;
    let names = scm.control_names();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let (m, ell) = if refs.is_empty() {
        (DVector::zeros(data.n()), DVector::zeros(data.n()))
    } else {
        let pi_d = DVector::from_vec(scm.population_ols(scm.treatment(), &refs)?);
        let pi_y = DVector::from_vec(scm.population_ols(scm.outcome(), &refs)?);
        (&data.x * pi_d, &data.x * pi_y)
    };
    let g = &ell - &m * theta;
    let n = data.n() as f64;

    let dml_moment = |s: f64| -> f64 {
        (0..data.n())
            .map(|i| {
                let rho_y = data.y[i] - s * ell[i];
                let rho_d = data.d[i] - s * m[i];
                (rho_y - theta * rho_d) * rho_d
            })
            .sum::<f64>()
            / n
    };
    let naive_moment = |s: f64| -> f64 {
        (0..data.n())
            .map(|i| (data.y[i] - theta * data.d[i] - s * g[i]) * data.d[i])
            .sum::<f64>()
            / n
    };
    let central = |f: &dyn Fn(f64) -> f64| (f(1.0 + epsilon) - f(1.0 - epsilon)) / (2.0 * epsilon);
    Ok(OrthogonalityProbe {
        dml_deriv: central(&dml_moment),
        naive_deriv: central(&naive_moment),
    })
}
