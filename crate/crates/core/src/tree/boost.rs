//! Second-order gradient boosting on log-loss.
//!
//! Starts from the mean label, carried internally as its log-odds. Each round
//! fits a regression tree to the gradients `g = p − y` and hessians
//! `h = p(1 − p)` of the current raw scores, choosing splits by the
//! regularised gain and setting leaf weights to `−G/(H + λ)`. The raw score
//! then moves by `η` times the tree output.

use serde::{Deserialize, Serialize};

use super::{midpoint, GAIN_TOLERANCE};
use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;
use crate::linear::sigmoid;

/// Base scores are clamped to `[BASE_CLAMP, 1 − BASE_CLAMP]` before the logit.
pub const BASE_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    pub rounds: usize,
    pub learning_rate: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub max_depth: usize,
}

impl Default for BoostParams {
    fn default() -> Self {
        Self {
            rounds: 100,
            learning_rate: 0.3,
            lambda: 1.0,
            gamma: 0.0,
            max_depth: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegressionNode {
    Leaf {
        weight: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<RegressionNode>,
        right: Box<RegressionNode>,
    },
}

impl RegressionNode {
    /// Depth-first index of the leaf reached by `x`, and its weight.
    pub fn leaf_of(&self, x: &[f64]) -> (usize, f64) {
        let mut node = self;
        let mut offset = 0;
        loop {
            match node {
                RegressionNode::Leaf { weight } => return (offset, *weight),
                RegressionNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if x[*feature] < *threshold {
                        node = left;
                    } else {
                        offset += left.n_leaves();
                        node = right;
                    }
                }
            }
        }
    }

    pub fn output(&self, x: &[f64]) -> f64 {
        self.leaf_of(x).1
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            RegressionNode::Leaf { .. } => 1,
            RegressionNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Leaf weights in depth-first order.
    pub fn leaf_weights(&self) -> Vec<f64> {
        match self {
            RegressionNode::Leaf { weight } => vec![*weight],
            RegressionNode::Split { left, right, .. } => {
                let mut w = left.leaf_weights();
                w.extend(right.leaf_weights());
                w
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RegressionNode::Leaf { .. } => 0,
            RegressionNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostModel {
    /// Mean training label.
    pub base_score: f64,
    /// Clamped logit of `base_score`.
    pub raw_init: f64,
    pub params: BoostParams,
    pub trees: Vec<RegressionNode>,
    pub n_features: usize,
    /// Mean training log-loss before round 1 and after each round.
    pub loss_trace: Vec<f64>,
    /// Summed log-loss plus `Σ_k (γT_k + λ/2 Σ w²)` over the trees built so far.
    pub objective_trace: Vec<f64>,
}

/// Initial prediction: the mean label.
pub fn xgb_init(labels: &[ClassLabel]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    labels.iter().map(|l| l.value()).sum::<f64>() / labels.len() as f64
}

/// Log-odds of a base score, clamped away from 0 and 1.
pub fn base_raw_score(base_score: f64) -> f64 {
    let p = base_score.clamp(BASE_CLAMP, 1.0 - BASE_CLAMP);
    (p / (1.0 - p)).ln()
}

fn structure_score(g: f64, h: f64, lambda: f64) -> f64 {
    let denom = h + lambda;
    if denom > 0.0 {
        g * g / denom
    } else {
        0.0
    }
}

/// `½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)] − γ`.
/// A zero denominator contributes 0.
pub fn xgb_split_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64, gamma: f64) -> f64 {
    0.5 * (structure_score(gl, hl, lambda) + structure_score(gr, hr, lambda)
        - structure_score(gl + gr, hl + hr, lambda))
        - gamma
}

/// `−G/(H + λ)`, or 0 when the denominator vanishes.
pub fn leaf_weight(g: f64, h: f64, lambda: f64) -> f64 {
    let denom = h + lambda;
    if denom > 0.0 {
        -g / denom
    } else {
        0.0
    }
}

/// Second-order objective of one round:
/// `Σ_j (G_j w_j + ½(H_j + λ) w_j²) + γT`, with `leaf_of[i]` the leaf of row `i`.
pub fn round_objective(
    grad: &[f64],
    hess: &[f64],
    leaf_of: &[usize],
    weights: &[f64],
    lambda: f64,
    gamma: f64,
) -> f64 {
    let mut g = vec![0.0; weights.len()];
    let mut h = vec![0.0; weights.len()];
    for ((&leaf, gi), hi) in leaf_of.iter().zip(grad).zip(hess) {
        g[leaf] += gi;
        h[leaf] += hi;
    }
    weights
        .iter()
        .enumerate()
        .map(|(j, w)| g[j] * w + 0.5 * (h[j] + lambda) * w * w)
        .sum::<f64>()
        + gamma * weights.len() as f64
}

struct Grower<'a> {
    data: &'a Dataset,
    grad: &'a [f64],
    hess: &'a [f64],
    params: &'a BoostParams,
}

impl Grower<'_> {
    fn grow(&self, rows: &[usize], depth: usize) -> RegressionNode {
        let g: f64 = rows.iter().map(|&i| self.grad[i]).sum();
        let h: f64 = rows.iter().map(|&i| self.hess[i]).sum();
        let leaf = RegressionNode::Leaf {
            weight: leaf_weight(g, h, self.params.lambda),
        };
        if depth >= self.params.max_depth || rows.len() < 2 {
            return leaf;
        }
        let Some((feature, threshold)) = self.best_split(rows, g, h) else {
            return leaf;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.data.value(i, feature) < threshold);
        RegressionNode::Split {
            feature,
            threshold,
            left: Box::new(self.grow(&left, depth + 1)),
            right: Box::new(self.grow(&right, depth + 1)),
        }
    }

    fn best_split(&self, rows: &[usize], g: f64, h: f64) -> Option<(usize, f64)> {
        let (lambda, gamma) = (self.params.lambda, self.params.gamma);
        let mut best: Option<(usize, f64, f64)> = None;
        let mut column: Vec<(f64, usize)> = Vec::with_capacity(rows.len());
        for f in 0..self.data.n_features() {
            column.clear();
            column.extend(rows.iter().map(|&i| (self.data.value(i, f), i)));
            column.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (mut gl, mut hl) = (0.0, 0.0);
            for k in 0..column.len() - 1 {
                let i = column[k].1;
                gl += self.grad[i];
                hl += self.hess[i];
                let (lo, hi) = (column[k].0, column[k + 1].0);
                if lo == hi {
                    continue;
                }
                let gain = xgb_split_gain(gl, hl, g - gl, h - hl, lambda, gamma);
                if gain <= GAIN_TOLERANCE {
                    continue;
                }
                if best.is_none_or(|b| gain > b.2 + GAIN_TOLERANCE) {
                    best = Some((f, midpoint(lo, hi), gain));
                }
            }
        }
        best.map(|(f, t, _)| (f, t))
    }
}

fn mean_log_loss(raw: &[f64], labels: &[ClassLabel]) -> f64 {
    let total: f64 = raw
        .iter()
        .zip(labels)
        .map(|(&z, y)| {
            let softplus = if z > 0.0 {
                z + (-z).exp().ln_1p()
            } else {
                z.exp().ln_1p()
            };
            softplus - y.value() * z
        })
        .sum();
    total / raw.len() as f64
}

fn penalty(tree: &RegressionNode, params: &BoostParams) -> f64 {
    let w = tree.leaf_weights();
    params.gamma * w.len() as f64 + 0.5 * params.lambda * w.iter().map(|v| v * v).sum::<f64>()
}

fn validate(params: &BoostParams) -> Result<(), ModelError> {
    let bad = |what: &str| Err(ModelError::InvalidHyperparameter(what.to_owned()));
    if !(params.learning_rate > 0.0 && params.learning_rate <= 1.0) {
        return bad("learning_rate must lie in (0, 1]");
    }
    if params.lambda.is_nan() || params.lambda < 0.0 {
        return bad("lambda must be ≥ 0");
    }
    if params.gamma.is_nan() || params.gamma < 0.0 {
        return bad("gamma must be ≥ 0");
    }
    Ok(())
}

pub fn fit_boost(train: &Dataset, params: &BoostParams) -> Result<BoostModel, ModelError> {
    let counts = train.class_counts();
    if train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if counts[0] == 0 || counts[1] == 0 {
        return Err(ModelError::SingleClass);
    }
    validate(params)?;
    let labels = train.labels();
    let base_score = xgb_init(labels);
    let raw_init = base_raw_score(base_score);
    let m = train.n_rows();
    let mut raw = vec![raw_init; m];
    let mut grad = vec![0.0; m];
    let mut hess = vec![0.0; m];
    let rows: Vec<usize> = (0..m).collect();

    let initial = mean_log_loss(&raw, labels);
    let mut loss_trace = vec![initial];
    let mut objective_trace = vec![initial * m as f64];
    let mut penalty_sum = 0.0;
    let mut trees = Vec::with_capacity(params.rounds);
    for round in 0..params.rounds {
        for i in 0..m {
            let p = sigmoid(raw[i]);
            grad[i] = p - labels[i].value();
            hess[i] = p * (1.0 - p);
        }
        let tree = Grower {
            data: train,
            grad: &grad,
            hess: &hess,
            params,
        }
        .grow(&rows, 0);
        for (i, r) in raw.iter_mut().enumerate() {
            *r += params.learning_rate * tree.output(train.row(i));
        }
        let loss = mean_log_loss(&raw, labels);
        if !loss.is_finite() {
            return Err(ModelError::NonFiniteLoss { iteration: round });
        }
        penalty_sum += penalty(&tree, params);
        loss_trace.push(loss);
        objective_trace.push(loss * m as f64 + penalty_sum);
        trees.push(tree);
    }
    Ok(BoostModel {
        base_score,
        raw_init,
        params: *params,
        trees,
        n_features: train.n_features(),
        loss_trace,
        objective_trace,
    })
}

impl BoostModel {
    /// `raw_init + η Σ_t f_t(x)`
    pub fn raw_score(&self, x: &[f64]) -> Result<f64, ModelError> {
        check_dim(self.n_features, x)?;
        Ok(self.raw_init
            + self.params.learning_rate * self.trees.iter().map(|t| t.output(x)).sum::<f64>())
    }
}

pub fn boost_score(model: &BoostModel, x: &[f64]) -> Result<f64, ModelError> {
    Ok(sigmoid(model.raw_score(x)?))
}

impl Classifier for BoostModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        boost_score(self, x)
    }
}
