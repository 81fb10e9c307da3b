//! One-vs-rest logistic regression.
//!
//! Each binary problem minimizes
//! `sum_i [log(1 + e^{z_i}) - y_i z_i] + |w|^2 / (2C)` with `z_i = w.x_i + b`
//! (intercept not penalized) by truncated Newton: conjugate gradient on
//! Hessian-vector products, then an Armijo backtracking line search, so the
//! loss never increases between iterations.

use crate::embed::FeatureMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_REG_STRENGTH: f64 = 1.0;

const GRAD_TOL: f64 = 1e-6;
const MAX_ITER: usize = 1000;

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Regularized binary logistic loss over a fixed design matrix.
///
/// Parameters are packed as `[w_0 .. w_{d-1}, b]`.
#[derive(Debug, Clone)]
pub struct LogisticObjective {
    rows: Vec<f64>,
    targets: Vec<f64>,
    dim: usize,
    inv_c: f64,
}

impl LogisticObjective {
    pub fn new(rows: Vec<f64>, targets: Vec<f64>, dim: usize, reg_strength: f64) -> Result<Self> {
        if rows.len() != targets.len() * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} samples of dimension {dim}",
                rows.len(),
                targets.len()
            )));
        }
        if !(reg_strength.is_finite() && reg_strength > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization strength must be positive, got {reg_strength}"
            )));
        }
        Ok(Self {
            rows,
            targets,
            dim,
            inv_c: 1.0 / reg_strength,
        })
    }

    pub fn param_len(&self) -> usize {
        self.dim + 1
    }

    fn margins(&self, theta: &[f64]) -> Vec<f64> {
        let (w, b) = theta.split_at(self.dim);
        self.rows
            .chunks_exact(self.dim)
            .map(|x| x.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b[0])
            .collect()
    }

    pub fn loss(&self, theta: &[f64]) -> f64 {
        let data: f64 = self
            .margins(theta)
            .iter()
            .zip(&self.targets)
            .map(|(&z, &y)| softplus(z) - y * z)
            .sum();
        let penalty: f64 = theta[..self.dim].iter().map(|w| w * w).sum();
        data + 0.5 * self.inv_c * penalty
    }

    pub fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let residual: Vec<f64> = self
            .margins(theta)
            .iter()
            .zip(&self.targets)
            .map(|(&z, &y)| sigmoid(z) - y)
            .collect();
        self.gradient_from(theta, &residual)
    }

    fn gradient_from(&self, theta: &[f64], residual: &[f64]) -> Vec<f64> {
        let mut grad: Vec<f64> = theta.iter().map(|w| w * self.inv_c).collect();
        grad[self.dim] = 0.0;
        for (x, &r) in self.rows.chunks_exact(self.dim).zip(residual) {
            for (g, a) in grad.iter_mut().zip(x) {
                *g += r * a;
            }
            grad[self.dim] += r;
        }
        grad
    }

    fn hessian_product(&self, curvature: &[f64], v: &[f64]) -> Vec<f64> {
        let (vw, vb) = v.split_at(self.dim);
        let mut out: Vec<f64> = v.iter().map(|x| x * self.inv_c).collect();
        out[self.dim] = 0.0;
        for (x, &d) in self.rows.chunks_exact(self.dim).zip(curvature) {
            let xv = x.iter().zip(vw).map(|(a, b)| a * b).sum::<f64>() + vb[0];
            let s = d * xv;
            for (o, a) in out.iter_mut().zip(x) {
                *o += s * a;
            }
            out[self.dim] += s;
        }
        out
    }

    /// Minimizes the loss from zero; returns the parameters and the loss
    /// after every accepted iteration (first entry is the starting loss).
    pub fn minimize(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.param_len();
        let mut theta = vec![0.0; n];
        let mut loss = self.loss(&theta);
        let mut history = vec![loss];
        for _ in 0..MAX_ITER {
            let margins = self.margins(&theta);
            let residual: Vec<f64> = margins
                .iter()
                .zip(&self.targets)
                .map(|(&z, &y)| sigmoid(z) - y)
                .collect();
            let grad = self.gradient_from(&theta, &residual);
            let gnorm = norm(&grad);
            if gnorm < GRAD_TOL {
                break;
            }
            let curvature: Vec<f64> = margins
                .iter()
                .map(|&z| {
                    let s = sigmoid(z);
                    s * (1.0 - s)
                })
                .collect();
            let direction = self.newton_direction(&curvature, &grad, gnorm);
            let slope = dot(&grad, &direction);
            if slope >= 0.0 {
                break;
            }
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = theta.iter().zip(&direction).map(|(t, d)| t + step * d).collect();
                let trial_loss = self.loss(&trial);
                if trial_loss <= loss + 1e-4 * step * slope {
                    accepted = Some((trial, trial_loss));
                    break;
                }
                step *= 0.5;
            }
            let Some((next, next_loss)) = accepted else {
                break;
            };
            theta = next;
            loss = next_loss;
            history.push(loss);
        }
        (theta, history)
    }

    /// Approximately solves `H p = -g` by conjugate gradients.
    fn newton_direction(&self, curvature: &[f64], grad: &[f64], gnorm: f64) -> Vec<f64> {
        let n = grad.len();
        let tol = (0.1f64.min(gnorm.sqrt()) * gnorm).max(1e-14);
        let mut p = vec![0.0; n];
        let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut d = r.clone();
        let mut rr = dot(&r, &r);
        for _ in 0..(2 * n).max(10) {
            let hd = self.hessian_product(curvature, &d);
            let dhd = dot(&d, &hd);
            if dhd <= 0.0 {
                break;
            }
            let alpha = rr / dhd;
            for i in 0..n {
                p[i] += alpha * d[i];
                r[i] -= alpha * hd[i];
            }
            let rr_next = dot(&r, &r);
            if rr_next.sqrt() < tol {
                break;
            }
            let beta = rr_next / rr;
            for i in 0..n {
                d[i] = r[i] + beta * d[i];
            }
            rr = rr_next;
        }
        if p.iter().all(|&x| x == 0.0) {
            return grad.iter().map(|g| -g).collect();
        }
        p
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl BinaryModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>() + self.bias
    }
}

/// One binary model per class, in class order.
#[derive(Debug, Clone, PartialEq)]
pub struct OvrModel {
    pub classes: Vec<BinaryModel>,
    pub reg_strength: f64,
}

impl OvrModel {
    pub fn dim(&self) -> usize {
        self.classes.first().map_or(0, |m| m.weights.len())
    }

    /// Highest-scoring class; ties go to the smaller class id.
    pub fn predict_row(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (class, model) in self.classes.iter().enumerate() {
            let s = model.score(x);
            if s > best_score {
                best = class;
                best_score = s;
            }
        }
        best
    }
}

/// Fits one binary model per class on the rows listed in `train`.
///
/// `labels[i]` is the class of row `i`; `label_count` fixes the number of
/// binary models (a class missing from the training rows gets a model fit
/// on all-negative targets).
pub fn train_ovr_logreg(
    features: &FeatureMatrix,
    labels: &[usize],
    label_count: usize,
    train: &[usize],
    reg_strength: f64,
) -> Result<OvrModel> {
    if labels.len() != features.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} feature rows",
            labels.len(),
            features.rows()
        )));
    }
    let dim = features.cols();
    let mut rows = Vec::with_capacity(train.len() * dim);
    for &i in train {
        let row = features.row(i);
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature row {i}")));
        }
        rows.extend_from_slice(row);
    }
    let classes = (0..label_count)
        .map(|class| {
            let targets = train.iter().map(|&i| f64::from(u8::from(labels[i] == class))).collect();
            let objective = LogisticObjective::new(rows.clone(), targets, dim, reg_strength)?;
            let (theta, _) = objective.minimize();
            Ok(BinaryModel {
                weights: theta[..dim].to_vec(),
                bias: theta[dim],
            })
        })
        .collect::<Result<_>>()?;
    Ok(OvrModel { classes, reg_strength })
}

pub fn predict(model: &OvrModel, features: &FeatureMatrix, rows: &[usize]) -> Result<Vec<usize>> {
    if features.cols() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} features, matrix has {}",
            model.dim(),
            features.cols()
        )));
    }
    Ok(rows.iter().map(|&i| model.predict_row(features.row(i))).collect())
}
