//! Bagged random forest: one bootstrap sample and one child random stream per
//! tree, a fresh random feature subset at every node, majority vote.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{grow_tree, Impurity, TreeNode, TreeParams};
use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    /// Candidate features per node; `None` means `floor(sqrt(n))`.
    pub feature_subset_size: Option<usize>,
    pub min_samples_split: usize,
    pub impurity: Impurity,
    /// Draw a bootstrap sample per tree. Off only for reduction tests.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: None,
            feature_subset_size: None,
            min_samples_split: 2,
            impurity: Impurity::Gini,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub n_features: usize,
    pub feature_subset_size: usize,
    pub params: ForestParams,
}

pub fn fit_forest(
    train: &Dataset,
    params: &ForestParams,
    rng: &RngStream,
) -> Result<ForestModel, ModelError> {
    if train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if params.n_trees == 0 {
        return Err(ModelError::InvalidHyperparameter("n_trees must be ≥ 1".into()));
    }
    let n = train.n_features();
    let k = params
        .feature_subset_size
        .unwrap_or_else(|| ((n as f64).sqrt().floor() as usize).max(1));
    if k == 0 || k > n {
        return Err(ModelError::InvalidHyperparameter(format!(
            "feature_subset_size {k} outside 1..={n}"
        )));
    }
    let tree_params = TreeParams {
        impurity: params.impurity,
        max_depth: params.max_depth,
        min_samples_split: params.min_samples_split,
    };
    let m = train.n_rows();
    // Each tree owns its stream, so the parallel result equals the serial one.
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.child(&format!("tree-{b}"));
            let rows: Vec<usize> = if params.bootstrap {
                (0..m).map(|_| stream.random_range(0..m)).collect()
            } else {
                (0..m).collect()
            };
            let mut pool = |n: usize| -> Vec<usize> {
                if k == n {
                    (0..n).collect()
                } else {
                    index::sample(&mut stream, n, k).into_vec()
                }
            };
            grow_tree(train, &rows, &tree_params, &mut pool)
        })
        .collect();
    Ok(ForestModel {
        trees,
        n_features: n,
        feature_subset_size: k,
        params: *params,
    })
}

/// Fraction of trees voting 1, and the majority class (tie → 0).
pub fn forest_predict(forest: &ForestModel, x: &[f64]) -> Result<(f64, ClassLabel), ModelError> {
    check_dim(forest.n_features, x)?;
    let votes = forest
        .trees
        .iter()
        .filter(|t| t.predict(x).1.is_positive())
        .count();
    let b = forest.trees.len();
    Ok((
        votes as f64 / b as f64,
        ClassLabel::from_bool(2 * votes > b),
    ))
}

impl Classifier for ForestModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(forest_predict(self, x)?.0)
    }

    /// Majority vote at the default threshold, vote fraction otherwise.
    fn predict(&self, x: &[f64], threshold: f64) -> Result<ClassLabel, ModelError> {
        let (score, class) = forest_predict(self, x)?;
        Ok(if threshold == 0.5 {
            class
        } else {
            ClassLabel::from_bool(score >= threshold)
        })
    }
}
