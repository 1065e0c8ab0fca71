use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{check_dims, LearnError};
use crate::features::FeatureVector;
use crate::seed;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearSolver {
    /// Dual coordinate descent over a seeded permutation per epoch.
    #[default]
    Dual,
    /// Full-batch gradient descent with backtracking line search.
    Gradient,
}

/// L2-regularized squared hinge loss.
///
/// The objective is `0.5 * (|w|^2 + b^2) + c * sum(max(0, 1 - y (w.x + b))^2)`,
/// i.e. the bias is penalized like a constant feature of value one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearConfig {
    pub c: f64,
    /// Epochs for the dual solver, steps for gradient descent.
    pub max_iter: usize,
    /// Dual: stop once the projected gradient spread over an epoch is below
    /// `tol`. Gradient: stop once the gradient norm falls below `tol` times
    /// its initial value.
    pub tol: f64,
    /// Seeds the dual solver's coordinate order.
    pub seed: u64,
    pub solver: LinearSolver,
}

impl Default for LinearConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            max_iter: 300,
            tol: 1e-4,
            seed: 0,
            solver: LinearSolver::Dual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: LinearConfig,
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn predict_margin(&self, x: &FeatureVector) -> Result<f64, LearnError> {
        if x.dim != self.weights.len() {
            return Err(LearnError::Dimension {
                expected: self.weights.len(),
                found: x.dim,
            });
        }
        Ok(x.dot(&self.weights) + self.bias)
    }

    /// True for the positive side; a zero margin counts as negative.
    pub fn predict(&self, x: &FeatureVector) -> Result<bool, LearnError> {
        Ok(self.predict_margin(x)? > 0.0)
    }
}

struct Problem<'a> {
    xs: &'a [FeatureVector],
    ys: Vec<f64>,
    c: f64,
}

impl Problem<'_> {
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let reg = 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b);
        let data: f64 = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| (1.0 - y * (x.dot(w) + b)).max(0.0).powi(2))
            .sum();
        reg + self.c * data
    }

    fn gradient(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let mut gw = w.to_vec();
        let mut gb = b;
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let slack = 1.0 - y * (x.dot(w) + b);
            if slack > 0.0 {
                let k = -2.0 * self.c * slack * y;
                for (i, v) in x.iter() {
                    gw[i] += k * v;
                }
                gb += k;
            }
        }
        (gw, gb)
    }
}

fn problem<'a>(xs: &'a [FeatureVector], ys: &[bool], config: &LinearConfig) -> Result<(Problem<'a>, usize), LearnError> {
    if xs.len() != ys.len() {
        return Err(LearnError::Length(xs.len(), ys.len()));
    }
    let dim = check_dims(xs)?;
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(LearnError::SingleClass(ys[0].to_string()));
    }
    let p = Problem {
        xs,
        ys: ys.iter().map(|&y| if y { 1.0 } else { -1.0 }).collect(),
        c: config.c,
    };
    Ok((p, dim))
}

pub fn train_linear(xs: &[FeatureVector], ys: &[bool], config: &LinearConfig) -> Result<LinearModel, LearnError> {
    match config.solver {
        LinearSolver::Gradient => train_linear_traced(xs, ys, config).map(|(m, _)| m),
        LinearSolver::Dual => train_dual(xs, ys, config),
    }
}

/// Coordinate descent on the dual of the squared hinge problem, with the
/// bias folded in as a constant unit feature.
fn train_dual(xs: &[FeatureVector], ys: &[bool], config: &LinearConfig) -> Result<LinearModel, LearnError> {
    let (p, dim) = problem(xs, ys, config)?;
    let d = 0.5 / config.c;
    let q: Vec<f64> = xs.iter().map(|x| x.values.iter().map(|v| v * v).sum::<f64>() + 1.0 + d).collect();
    let mut alpha = vec![0.0; xs.len()];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut rng = seed::rng(config.seed, 0);
    for _ in 0..config.max_iter {
        order.shuffle(&mut rng);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in &order {
            let y = p.ys[i];
            let g = y * (xs[i].dot(&w) + b) - 1.0 + d * alpha[i];
            let pg = if alpha[i] == 0.0 { g.min(0.0) } else { g };
            lo = lo.min(pg);
            hi = hi.max(pg);
            if pg != 0.0 {
                let next = (alpha[i] - g / q[i]).max(0.0);
                let delta = (next - alpha[i]) * y;
                alpha[i] = next;
                for (j, v) in xs[i].iter() {
                    w[j] += delta * v;
                }
                b += delta;
            }
        }
        if hi - lo <= config.tol {
            break;
        }
    }
    Ok(LinearModel {
        weights: w,
        bias: b,
        config: *config,
    })
}

/// Train by gradient descent and also return the objective value after
/// every step, whatever `config.solver` says.
pub fn train_linear_traced(
    xs: &[FeatureVector],
    ys: &[bool],
    config: &LinearConfig,
) -> Result<(LinearModel, Vec<f64>), LearnError> {
    let (p, dim) = problem(xs, ys, config)?;
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut f = p.loss(&w, b);
    let mut trace = vec![f];
    let mut step = 1.0 / (1.0 + 2.0 * config.c * xs.len() as f64);
    let mut g0 = None;
    for _ in 0..config.max_iter {
        let (gw, gb) = p.gradient(&w, b);
        let gnorm2 = gw.iter().map(|v| v * v).sum::<f64>() + gb * gb;
        let g0 = *g0.get_or_insert(gnorm2.sqrt());
        if gnorm2.sqrt() <= config.tol * g0 || gnorm2 == 0.0 {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let nw: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - step * g).collect();
            let nb = b - step * gb;
            let nf = p.loss(&nw, nb);
            if nf <= f - 1e-4 * step * gnorm2 {
                w = nw;
                b = nb;
                f = nf;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        trace.push(f);
        step *= 2.0;
    }
    Ok((
        LinearModel {
            weights: w,
            bias: b,
            config: *config,
        },
        trace,
    ))
}
