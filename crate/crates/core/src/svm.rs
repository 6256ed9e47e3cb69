//! Soft-margin linear SVM.
//!
//! Minimises `½‖w‖² + C Σ max(0, 1 − yᵢ(w·xᵢ + b))` by shuffled stochastic
//! subgradient steps of size `1/(λt)` with `λ = 1/(C m)`, which is the same
//! problem scaled by `1/(C m)`. The bias is unregularised. The returned
//! parameters are the average of the iterates visited during the final epoch.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;
use crate::linear::sigmoid;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { c: 1.0, epochs: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub params: SvmParams,
    /// Primal objective at each epoch's averaged iterate.
    pub objective_trace: Vec<f64>,
}

fn signed(label: ClassLabel) -> f64 {
    if label.is_positive() {
        1.0
    } else {
        -1.0
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `½‖w‖² + C Σ max(0, 1 − yᵢ(w·xᵢ + b))`
pub fn svm_objective(weights: &[f64], bias: f64, data: &Dataset, c: f64) -> f64 {
    let hinge: f64 = data
        .rows()
        .zip(data.labels())
        .map(|(x, &y)| (1.0 - signed(y) * (dot(weights, x) + bias)).max(0.0))
        .sum();
    0.5 * dot(weights, weights) + c * hinge
}

/// A subgradient of [`svm_objective`]; the true gradient away from kinks.
/// Points exactly on the margin contribute nothing.
pub fn svm_subgradient(weights: &[f64], bias: f64, data: &Dataset, c: f64) -> (Vec<f64>, f64) {
    let mut gw = weights.to_vec();
    let mut gb = 0.0;
    for (x, &y) in data.rows().zip(data.labels()) {
        let y = signed(y);
        if y * (dot(weights, x) + bias) < 1.0 {
            for (g, xi) in gw.iter_mut().zip(x) {
                *g -= c * y * xi;
            }
            gb -= c * y;
        }
    }
    (gw, gb)
}

pub fn fit_svm(train: &Dataset, params: &SvmParams, rng: &mut RngStream) -> Result<SvmModel, ModelError> {
    let counts = train.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(ModelError::SingleClass);
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(ModelError::InvalidHyperparameter(format!("C = {}", params.c)));
    }
    let m = train.n_rows();
    let n = train.n_features();
    let lambda = 1.0 / (params.c * m as f64);

    let mut w = vec![0.0; n];
    let mut b = 0.0;
    let mut avg_w = vec![0.0; n];
    let mut avg_b = 0.0;
    let mut order: Vec<usize> = (0..m).collect();
    let mut objective_trace = Vec::with_capacity(params.epochs);
    let mut t = 0usize;
    for _ in 0..params.epochs {
        order.shuffle(rng);
        avg_w.iter_mut().for_each(|v| *v = 0.0);
        avg_b = 0.0;
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let x = train.row(i);
            let y = signed(train.label(i));
            let violated = y * (dot(&w, x) + b) < 1.0;
            let shrink = 1.0 - eta * lambda;
            w.iter_mut().for_each(|v| *v *= shrink);
            if violated {
                for (v, xi) in w.iter_mut().zip(x) {
                    *v += eta * y * xi;
                }
                b += eta * y;
            }
            for (a, v) in avg_w.iter_mut().zip(&w) {
                *a += v;
            }
            avg_b += b;
        }
        avg_w.iter_mut().for_each(|v| *v /= m as f64);
        avg_b /= m as f64;
        objective_trace.push(svm_objective(&avg_w, avg_b, train, params.c));
    }
    let (weights, bias) = if params.epochs == 0 {
        (w, b)
    } else {
        (avg_w, avg_b)
    };
    Ok(SvmModel {
        weights,
        bias,
        params: *params,
        objective_trace,
    })
}

/// Signed margin `w·x + b`.
pub fn svm_decision(model: &SvmModel, x: &[f64]) -> Result<f64, ModelError> {
    check_dim(model.weights.len(), x)?;
    Ok(dot(&model.weights, x) + model.bias)
}

/// Class 1 iff the decision value is ≥ 0.
pub fn svm_predict(model: &SvmModel, x: &[f64]) -> Result<ClassLabel, ModelError> {
    Ok(ClassLabel::from_bool(svm_decision(model, x)? >= 0.0))
}

impl Classifier for SvmModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    /// σ(decision), so the 0.5 threshold reproduces the sign rule.
    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(sigmoid(svm_decision(self, x)?))
    }
}
