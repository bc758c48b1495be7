//! Least squares with heteroskedasticity-robust errors, cyclic
//! coordinate-descent LASSO, the plug-in penalty level and post-LASSO refits.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegressError {
    #[error("design column {column} is collinear with earlier columns")]
    Singular { column: usize },
    #[error("need more observations ({n}) than columns ({k})")]
    TooFewObservations { n: usize, k: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("response has zero variance")]
    ZeroVariance,
    #[error("penalty must be non-negative, got {0}")]
    NegativePenalty(f64),
}

pub type Result<T> = std::result::Result<T, RegressError>;

/// Relative size of a QR pivot below which a column counts as collinear.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: DVector<f64>,
    /// HC1 standard errors.
    pub standard_errors: DVector<f64>,
    pub residuals: DVector<f64>,
}

/// Least squares of `y` on the columns of `x` (no intercept is added).
///
/// Solved through a Householder QR; the first column whose pivot vanishes
/// relative to its norm is reported as singular.
pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsFit> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(RegressError::Dimension(format!("X has {n} rows, y has {}", y.len())));
    }
    if n <= k {
        return Err(RegressError::TooFewObservations { n, k });
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(RegressError::NonFinite("regression input"));
    }
    if k == 0 {
        return Ok(OlsFit {
            coefficients: DVector::zeros(0),
            standard_errors: DVector::zeros(0),
            residuals: y.clone(),
        });
    }
    let qr = x.clone().qr();
    let r = qr.r();
    for j in 0..k {
        let norm = x.column(j).norm();
        if r[(j, j)].abs() <= RANK_TOL * norm {
            return Err(RegressError::Singular { column: j });
        }
    }
    let q = qr.q();
    let qty = q.transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or(RegressError::Singular { column: k - 1 })?;
    let residuals = y - x * &beta;

    // (X'X)^{-1} = R^{-1} R^{-T} and X R^{-1} = Q
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or(RegressError::Singular { column: k - 1 })?;
    let mut meat = DMatrix::<f64>::zeros(k, k);
    for i in 0..n {
        let e2 = residuals[i] * residuals[i];
        if e2 == 0.0 {
            continue;
        }
        let qi = q.row(i);
        for a in 0..k {
            let w = e2 * qi[a];
            for b in a..k {
                meat[(a, b)] += w * qi[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            meat[(a, b)] = meat[(b, a)];
        }
    }
    let scale = n as f64 / (n - k) as f64;
    let cov = &r_inv * meat * r_inv.transpose() * scale;
    let standard_errors = DVector::from_fn(k, |j, _| cov[(j, j)].max(0.0).sqrt());
    Ok(OlsFit {
        coefficients: beta,
        standard_errors,
        residuals,
    })
}

/// Prepends a column of ones.
pub fn with_intercept(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut out = DMatrix::from_element(n, x.ncols() + 1, 1.0);
    out.columns_mut(1, x.ncols()).copy_from(x);
    out
}

/// OLS of `y` on an intercept plus the `support` columns of `x`.
/// Coefficient 0 is the intercept; the rest follow `support`.
pub fn post_lasso(x: &DMatrix<f64>, y: &DVector<f64>, support: &[usize]) -> Result<OlsFit> {
    if let Some(&bad) = support.iter().find(|&&j| j >= x.ncols()) {
        return Err(RegressError::Dimension(format!(
            "support index {bad} outside {} columns",
            x.ncols()
        )));
    }
    let sub = x.select_columns(support);
    ols(&with_intercept(&sub), y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoOptions {
    pub max_sweeps: usize,
    /// Stop once the largest coefficient change in a full sweep falls below
    /// this (standardized scale).
    pub tol: f64,
    /// Columns exempt from the penalty.
    pub unpenalized: Vec<usize>,
    /// Record the objective after every sweep.
    pub trace_objective: bool,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions {
            max_sweeps: 10_000,
            tol: 1e-7,
            unpenalized: Vec::new(),
            trace_objective: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    /// Slopes on the original column scale, full design width.
    pub coefficients: DVector<f64>,
    pub intercept: f64,
    pub lambda: f64,
    pub active_set: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each sweep when requested.
    pub objective_trace: Vec<f64>,
}

/// Design columns centred and scaled to unit (population) standard
/// deviation, stored column-major.
#[derive(Debug, Clone)]
pub(crate) struct Standardized {
    n: usize,
    p: usize,
    z: Vec<f64>,
    mean: Vec<f64>,
    // zero marks a constant column, which never enters
    scale: Vec<f64>,
}

impl Standardized {
    pub(crate) fn new(x: &DMatrix<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(RegressError::NonFinite("design"));
        }
        let mut z = vec![0.0; n * p];
        let mut mean = vec![0.0; p];
        let mut scale = vec![0.0; p];
        for j in 0..p {
            let col = x.column(j);
            let m = col.sum() / n as f64;
            let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
            mean[j] = m;
            let sd = var.sqrt();
            // constant up to rounding
            if sd > 1e-12 * (1.0 + m.abs()) {
                scale[j] = sd;
                let zc = &mut z[j * n..(j + 1) * n];
                for (dst, v) in zc.iter_mut().zip(col.iter()) {
                    *dst = (v - m) / sd;
                }
            }
        }
        Ok(Standardized { n, p, z, mean, scale })
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.z[j * self.n..(j + 1) * self.n]
    }

    /// Runs coordinate descent on the centred response `yc`, starting from
    /// `beta` (standardized scale), which is updated in place.
    fn descend(
        &self,
        yc: &[f64],
        lambda: f64,
        opts: &LassoOptions,
        beta: &mut [f64],
    ) -> (usize, bool, Vec<f64>) {
        let n = self.n as f64;
        let mut penalized = vec![true; self.p];
        for &j in &opts.unpenalized {
            if j < self.p {
                penalized[j] = false;
            }
        }
        let mut r: Vec<f64> = yc.to_vec();
        for j in 0..self.p {
            if beta[j] != 0.0 {
                for (ri, zi) in r.iter_mut().zip(self.col(j)) {
                    *ri -= beta[j] * zi;
                }
            }
        }
        let mut trace = Vec::new();
        let mut sweeps = 0;
        let mut converged = false;
        let objective = |r: &[f64], beta: &[f64]| -> f64 {
            let rss: f64 = r.iter().map(|v| v * v).sum();
            let l1: f64 = (0..self.p)
                .filter(|&j| penalized[j])
                .map(|j| beta[j].abs())
                .sum();
            rss / (2.0 * n) + lambda * l1
        };
        let update = |j: usize, r: &mut [f64], beta: &mut [f64]| -> f64 {
            if self.scale[j] == 0.0 {
                return 0.0;
            }
            let zj = self.col(j);
            let grad = zj.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>() / n;
            let raw = grad + beta[j];
            let new = if penalized[j] { soft_threshold(raw, lambda) } else { raw };
            let delta = new - beta[j];
            if delta != 0.0 {
                for (ri, zi) in r.iter_mut().zip(zj) {
                    *ri -= delta * zi;
                }
                beta[j] = new;
            }
            delta.abs()
        };
        while sweeps < opts.max_sweeps {
            let mut max_change = 0.0f64;
            for j in 0..self.p {
                max_change = max_change.max(update(j, &mut r, beta));
            }
            sweeps += 1;
            if opts.trace_objective {
                trace.push(objective(&r, beta));
            }
            if max_change < opts.tol {
                converged = true;
                break;
            }
            // cycle over the current active set before the next full sweep
            let active: Vec<usize> = (0..self.p).filter(|&j| beta[j] != 0.0).collect();
            while sweeps < opts.max_sweeps {
                let mut change = 0.0f64;
                for &j in &active {
                    change = change.max(update(j, &mut r, beta));
                }
                sweeps += 1;
                if opts.trace_objective {
                    trace.push(objective(&r, beta));
                }
                if change < opts.tol {
                    break;
                }
            }
        }
        (sweeps, converged, trace)
    }

    fn to_fit(&self, beta: &[f64], y_mean: f64, lambda: f64, run: (usize, bool, Vec<f64>)) -> LassoFit {
        let coefficients = DVector::from_fn(self.p, |j, _| {
            if self.scale[j] == 0.0 {
                0.0
            } else {
                beta[j] / self.scale[j]
            }
        });
        let intercept = y_mean
            - coefficients
                .iter()
                .zip(&self.mean)
                .map(|(b, m)| b * m)
                .sum::<f64>();
        let active_set = (0..self.p).filter(|&j| beta[j] != 0.0).collect();
        LassoFit {
            coefficients,
            intercept,
            lambda,
            active_set,
            iterations: run.0,
            converged: run.1,
            objective_trace: run.2,
        }
    }
}

pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn centred(y: &DVector<f64>) -> (Vec<f64>, f64) {
    let m = y.mean();
    (y.iter().map(|v| v - m).collect(), m)
}

/// Minimizes `(1/2n)||y - b0 - X b||^2 + lambda ||b||_1` by cyclic
/// coordinate descent with an unpenalized intercept.
pub fn lasso_cd(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<LassoFit> {
    lasso_cd_with(x, y, lambda, &LassoOptions::default())
}

pub fn lasso_cd_with(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    lambda: f64,
    opts: &LassoOptions,
) -> Result<LassoFit> {
    check_lasso_input(x, y, lambda)?;
    let std = Standardized::new(x)?;
    let (yc, ym) = centred(y);
    let mut beta = vec![0.0; std.p];
    let run = std.descend(&yc, lambda, opts, &mut beta);
    Ok(std.to_fit(&beta, ym, lambda, run))
}

fn check_lasso_input(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<()> {
    if y.len() != x.nrows() {
        return Err(RegressError::Dimension(format!(
            "X has {} rows, y has {}",
            x.nrows(),
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(RegressError::NonFinite("response"));
    }
    if !lambda.is_finite() {
        return Err(RegressError::NonFinite("penalty"));
    }
    if lambda < 0.0 {
        return Err(RegressError::NegativePenalty(lambda));
    }
    Ok(())
}

/// Smallest penalty at which every penalized coefficient is zero.
pub fn lambda_max(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<f64> {
    let std = Standardized::new(x)?;
    let (yc, _) = centred(y);
    Ok((0..std.p)
        .map(|j| {
            std.col(j).iter().zip(&yc).map(|(a, b)| a * b).sum::<f64>().abs() / std.n as f64
        })
        .fold(0.0, f64::max))
}

pub const PLUGIN_C: f64 = 1.1;
pub const PLUGIN_SIGMA_ITERATIONS: usize = 5;
/// Penalty multiplier for the first refinement pass. Starting from `sd(y)`
/// the full penalty can exceed every score and pin the fit at the empty
/// model; the halved first pass follows the usual rlasso practice.
pub const PLUGIN_FIRST_PASS_SCALE: f64 = 0.5;

/// `c * sigma * Phi^{-1}(1 - gamma / (2 p)) / sqrt(n)` with
/// `gamma = 0.1 / ln(max(n, p))`.
pub fn plugin_penalty(n: usize, p: usize, sigma: f64) -> f64 {
    let p = p.max(1);
    let gamma = 0.1 / (n.max(p) as f64).ln();
    let normal = Normal::standard();
    PLUGIN_C * sigma * normal.inverse_cdf(1.0 - gamma / (2.0 * p as f64)) / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PluginLambda {
    pub lambda: f64,
    pub sigma: f64,
}

/// Plug-in penalty with the noise level refined from post-LASSO residuals,
/// starting at `sd(y)`.
pub fn plugin_lambda(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<PluginLambda> {
    Ok(plugin_select(x, y, &[])?.penalty)
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub penalty: PluginLambda,
    pub fit: LassoFit,
}

/// Plug-in penalty refinement followed by the LASSO fit at the final
/// penalty. Columns in `unpenalized` are always kept in the model.
pub fn plugin_select(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    unpenalized: &[usize],
) -> Result<Selection> {
    let (n, p) = x.shape();
    check_lasso_input(x, y, 0.0)?;
    let (yc, ym) = centred(y);
    let var = yc.iter().map(|v| v * v).sum::<f64>() / (n as f64 - 1.0).max(1.0);
    if var <= 0.0 || !var.is_finite() {
        return Err(RegressError::ZeroVariance);
    }
    let std = Standardized::new(x)?;
    let opts = LassoOptions {
        unpenalized: unpenalized.to_vec(),
        ..LassoOptions::default()
    };
    let mut sigma = var.sqrt();
    let mut beta = vec![0.0; p];
    for pass in 0..PLUGIN_SIGMA_ITERATIONS {
        let scale = if pass == 0 { PLUGIN_FIRST_PASS_SCALE } else { 1.0 };
        let lambda = scale * plugin_penalty(n, p, sigma);
        let run = std.descend(&yc, lambda, &opts, &mut beta);
        let fit = std.to_fit(&beta, ym, lambda, run);
        let rss = match post_lasso(x, y, &fit.active_set) {
            Ok(refit) => refit.residuals.norm_squared(),
            Err(_) => {
                let pred = x * &fit.coefficients;
                y.iter()
                    .zip(pred.iter())
                    .map(|(a, b)| (a - fit.intercept - b).powi(2))
                    .sum()
            }
        };
        let dof = n.saturating_sub(fit.active_set.len() + 1).max(1);
        let next = (rss / dof as f64).sqrt();
        if next > 0.0 && next.is_finite() {
            sigma = next;
        }
    }
    let lambda = plugin_penalty(n, p, sigma);
    let run = std.descend(&yc, lambda, &opts, &mut beta);
    let fit = std.to_fit(&beta, ym, lambda, run);
    Ok(Selection {
        penalty: PluginLambda { lambda, sigma },
        fit,
    })
}
