#![allow(dead_code)]

use dagdml::graph::CausalGraph;
use dagdml::regress::LassoFit;
use dagdml::scm::{Dataset, LinearScm};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random semi-Markovian model on `k` nodes named `V0..`. Directed edges go
/// from lower to higher index, so the graph is acyclic by construction.
/// Coefficients have magnitude in [0.3, 0.9] with random sign.
pub fn random_scm(k: usize, p_edge: f64, p_arc: f64, seed: u64) -> LinearScm {
    let mut r = rng(seed);
    let names: Vec<String> = (0..k).map(|i| format!("V{i}")).collect();
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            if r.random_bool(p_edge) {
                directed.push((names[i].clone(), names[j].clone()));
            } else if r.random_bool(p_arc) {
                bidirected.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let graph = CausalGraph::new(&names, &directed, &bidirected).unwrap();
    let coef = |r: &mut ChaCha8Rng| {
        let m = r.random_range(0.3..0.9);
        if r.random_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let coeff = (0..graph.directed_edges().len()).map(|_| coef(&mut r)).collect();
    let latent = (0..graph.bidirected_edges().len())
        .map(|_| (coef(&mut r), coef(&mut r)))
        .collect();
    let noise = vec![1.0; k];
    LinearScm::new(graph, coeff, latent, noise, "V0", "V1").unwrap()
}

/// Partial correlation of `a` and `b` given `z` from a covariance matrix.
pub fn partial_corr(sigma: &DMatrix<f64>, a: usize, b: usize, z: &[usize]) -> f64 {
    let mut idx = vec![a, b];
    idx.extend_from_slice(z);
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| sigma[(idx[i], idx[j])]);
    let prec = sub.try_inverse().expect("covariance is positive definite");
    -prec[(0, 1)] / (prec[(0, 0)] * prec[(1, 1)]).sqrt()
}

/// All subsets of `items`.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Largest KKT violation of a LASSO fit on a design that is already
/// centred with unit population standard deviation.
pub fn kkt_violation(z: &DMatrix<f64>, y: &DVector<f64>, fit: &LassoFit) -> f64 {
    let n = z.nrows() as f64;
    let r = y - z * &fit.coefficients - DVector::from_element(y.len(), fit.intercept);
    let score = z.transpose() * r / n;
    (0..z.ncols())
        .map(|j| {
            let b = fit.coefficients[j];
            if b == 0.0 {
                (score[j].abs() - fit.lambda).max(0.0)
            } else {
                (score[j] - fit.lambda * b.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Centres each column and scales it to unit population standard deviation.
pub fn standardize(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows() as f64;
    let mut z = x.clone();
    for mut col in z.column_iter_mut() {
        let m = col.sum() / n;
        col.add_scalar_mut(-m);
        let sd = (col.norm_squared() / n).sqrt();
        col /= sd;
    }
    z
}

/// Small random regression problem: `y = 1.5 d + x b + e`, `d = x a + v`.
pub fn random_dataset(n: usize, p: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let g = |r: &mut ChaCha8Rng| -> f64 { r.sample(rand_distr::StandardNormal) };
    let x = DMatrix::from_fn(n, p, |_, _| g(&mut r));
    let a: Vec<f64> = (0..p).map(|_| r.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..p).map(|_| r.random_range(-1.0..1.0)).collect();
    let mut d = DVector::zeros(n);
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let xa: f64 = (0..p).map(|j| x[(i, j)] * a[j]).sum();
        let xb: f64 = (0..p).map(|j| x[(i, j)] * b[j]).sum();
        d[i] = xa + g(&mut r);
        y[i] = 1.5 * d[i] + xb + g(&mut r);
    }
    let names = (1..=p).map(|j| format!("X{j}")).collect();
    Dataset::new(y, d, x, names).unwrap()
}
