//! CART classification trees, bagged forests and second-order gradient
//! boosting.
//!
//! All trees share one routing rule: a row goes left iff
//! `x[feature] < threshold`. Candidate thresholds are midpoints between
//! consecutive distinct values of a feature among the node's rows. Features
//! are scanned in ascending index order and thresholds in ascending order; a
//! later candidate replaces the incumbent only if it is better by more than
//! [`GAIN_TOLERANCE`], so near-ties go to the lower feature index and then the
//! lower threshold.

pub mod boost;
pub mod forest;

use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;

pub use boost::{
    boost_score, fit_boost, leaf_weight, round_objective, xgb_init, xgb_split_gain, BoostModel,
    BoostParams, RegressionNode,
};
pub use forest::{fit_forest, forest_predict, ForestModel, ForestParams};

/// Minimum improvement for a split to count, and the margin a later
/// candidate must beat the incumbent by.
pub const GAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Impurity {
    #[default]
    Gini,
    Entropy,
}

impl Impurity {
    pub fn of(self, counts: [usize; 2]) -> Result<f64, ModelError> {
        match self {
            Impurity::Gini => gini(counts),
            Impurity::Entropy => entropy(counts),
        }
    }
}

fn proportions(counts: [usize; 2]) -> Result<[f64; 2], ModelError> {
    let total = counts[0] + counts[1];
    if total == 0 {
        return Err(ModelError::EmptyNode);
    }
    let t = total as f64;
    Ok([counts[0] as f64 / t, counts[1] as f64 / t])
}

/// `1 − Σ p_c²`
pub fn gini(counts: [usize; 2]) -> Result<f64, ModelError> {
    let p = proportions(counts)?;
    Ok(1.0 - p.iter().map(|q| q * q).sum::<f64>())
}

/// `−Σ p_c log₂ p_c`, with `0 log 0 = 0`.
pub fn entropy(counts: [usize; 2]) -> Result<f64, ModelError> {
    let p = proportions(counts)?;
    Ok(-p
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|q| q * q.log2())
        .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    /// Weighted impurity decrease.
    pub gain: f64,
    pub left_counts: [usize; 2],
    pub right_counts: [usize; 2],
}

pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * 0.5
}

/// Best impurity-decreasing split of `rows` over `features`, or `None` when
/// no candidate decreases impurity.
pub fn best_split(
    data: &Dataset,
    rows: &[usize],
    impurity: Impurity,
    features: &[usize],
) -> Option<SplitCandidate> {
    if rows.len() < 2 {
        return None;
    }
    let mut total = [0usize; 2];
    for &i in rows {
        total[data.label(i).index()] += 1;
    }
    let parent = impurity.of(total).ok()?;
    if parent == 0.0 {
        return None;
    }
    let n = rows.len() as f64;
    let mut pool = features.to_vec();
    pool.sort_unstable();
    pool.dedup();

    let mut best: Option<SplitCandidate> = None;
    let mut column: Vec<(f64, ClassLabel)> = Vec::with_capacity(rows.len());
    for &f in &pool {
        column.clear();
        column.extend(rows.iter().map(|&i| (data.value(i, f), data.label(i))));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left = [0usize; 2];
        for k in 0..column.len() - 1 {
            left[column[k].1.index()] += 1;
            let (lo, hi) = (column[k].0, column[k + 1].0);
            if lo == hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (k + 1) as f64;
            let gain = parent
                - (nl / n) * impurity.of(left).unwrap()
                - ((n - nl) / n) * impurity.of(right).unwrap();
            if gain <= GAIN_TOLERANCE {
                continue;
            }
            if best.is_none_or(|b| gain > b.gain + GAIN_TOLERANCE) {
                best = Some(SplitCandidate {
                    feature: f,
                    threshold: midpoint(lo, hi),
                    gain,
                    left_counts: left,
                    right_counts: right,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        counts: [usize; 2],
        /// Fraction of positive rows in the leaf.
        probability: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn leaf(counts: [usize; 2]) -> Self {
        let total = counts[0] + counts[1];
        TreeNode::Leaf {
            counts,
            probability: counts[1] as f64 / total as f64,
        }
    }

    /// Leaf reached by `x`.
    pub fn route(&self, x: &[f64]) -> &TreeNode {
        let mut node = self;
        while let TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        } = node
        {
            node = if x[*feature] < *threshold { left } else { right };
        }
        node
    }

    /// Positive fraction at the reached leaf and the class it implies (≥ 0.5 → 1).
    pub fn predict(&self, x: &[f64]) -> (f64, ClassLabel) {
        match self.route(x) {
            TreeNode::Leaf { probability, .. } => {
                (*probability, ClassLabel::from_bool(*probability >= 0.5))
            }
            TreeNode::Split { .. } => unreachable!("route always ends at a leaf"),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub impurity: Impurity,
    /// `None` grows until the other stopping rules fire.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            impurity: Impurity::Gini,
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

/// Grow a tree over `rows` (repeats allowed). `feature_pool` is asked for the
/// candidate features at every node.
pub fn grow_tree(
    data: &Dataset,
    rows: &[usize],
    params: &TreeParams,
    feature_pool: &mut dyn FnMut(usize) -> Vec<usize>,
) -> TreeNode {
    grow(data, rows.to_vec(), 0, params, feature_pool)
}

fn grow(
    data: &Dataset,
    rows: Vec<usize>,
    depth: usize,
    params: &TreeParams,
    feature_pool: &mut dyn FnMut(usize) -> Vec<usize>,
) -> TreeNode {
    let mut counts = [0usize; 2];
    for &i in &rows {
        counts[data.label(i).index()] += 1;
    }
    let pure = counts[0] == 0 || counts[1] == 0;
    let depth_reached = params.max_depth.is_some_and(|d| depth >= d);
    if pure || depth_reached || rows.len() < params.min_samples_split.max(2) {
        return TreeNode::leaf(counts);
    }
    let features = feature_pool(data.n_features());
    let Some(split) = best_split(data, &rows, params.impurity, &features) else {
        return TreeNode::leaf(counts);
    };
    let (left, right): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&i| data.value(i, split.feature) < split.threshold);
    TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow(data, left, depth + 1, params, feature_pool)),
        right: Box::new(grow(data, right, depth + 1, params, feature_pool)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_features: usize,
    pub params: TreeParams,
}

/// CART on every row and every feature.
pub fn fit_tree(train: &Dataset, params: &TreeParams) -> Result<DecisionTree, ModelError> {
    if train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let rows: Vec<usize> = (0..train.n_rows()).collect();
    let root = grow_tree(train, &rows, params, &mut |n| (0..n).collect());
    Ok(DecisionTree {
        root,
        n_features: train.n_features(),
        params: *params,
    })
}

pub fn tree_predict(tree: &DecisionTree, x: &[f64]) -> Result<(f64, ClassLabel), ModelError> {
    check_dim(tree.n_features, x)?;
    Ok(tree.root.predict(x))
}

impl Classifier for DecisionTree {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(tree_predict(self, x)?.0)
    }
}
