//! The shared classifier contract and the closed set of fitted models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bayes::{fit_gnb, GnbModel, GnbParams};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;
use crate::knn::{fit_knn, KnnModel, KnnParams};
use crate::linear::{fit_lda, fit_logistic, LdaModel, LdaParams, LogisticModel, LogisticParams};
use crate::rng::RngStream;
use crate::svm::{fit_svm, SvmModel, SvmParams};
use crate::tree::{
    fit_boost, fit_forest, fit_tree, BoostModel, BoostParams, DecisionTree, ForestModel,
    ForestParams, TreeParams,
};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// A fitted binary classifier. Scores lie in [0, 1]; larger means more
/// likely positive.
pub trait Classifier: Send + Sync {
    fn n_features(&self) -> usize;

    fn score(&self, x: &[f64]) -> Result<f64, ModelError>;

    /// Class 1 iff `score(x) >= threshold`. Vote-based models override this
    /// to use their majority rule at the default threshold.
    fn predict(&self, x: &[f64], threshold: f64) -> Result<ClassLabel, ModelError> {
        Ok(ClassLabel::from_bool(self.score(x)? >= threshold))
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), ModelError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            expected,
            got: x.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Logreg,
    Lda,
    Svm,
    Dtree,
    Rforest,
    Gnb,
    Knn,
    Xgboost,
}

impl ModelKind {
    /// Report order.
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Logreg,
        ModelKind::Lda,
        ModelKind::Svm,
        ModelKind::Rforest,
        ModelKind::Dtree,
        ModelKind::Gnb,
        ModelKind::Knn,
        ModelKind::Xgboost,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Logreg => "logreg",
            ModelKind::Lda => "lda",
            ModelKind::Svm => "svm",
            ModelKind::Dtree => "dtree",
            ModelKind::Rforest => "rforest",
            ModelKind::Gnb => "gnb",
            ModelKind::Knn => "knn",
            ModelKind::Xgboost => "xgboost",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ModelKind::Logreg => "Logistic Regression",
            ModelKind::Lda => "Linear Discriminant Analysis",
            ModelKind::Svm => "Support Vector Machines",
            ModelKind::Dtree => "Decision Trees",
            ModelKind::Rforest => "Random Forest",
            ModelKind::Gnb => "Naive Bayes",
            ModelKind::Knn => "K-Nearest Neighbor",
            ModelKind::Xgboost => "XGBoost",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| {
                format!(
                    "unknown model `{s}` (expected one of {})",
                    ModelKind::ALL.map(|k| k.id()).join(", ")
                )
            })
    }
}

/// Hyperparameters for every model family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub logreg: LogisticParams,
    pub lda: LdaParams,
    pub svm: SvmParams,
    pub dtree: TreeParams,
    pub rforest: ForestParams,
    pub gnb: GnbParams,
    pub knn: KnnParams,
    pub xgboost: BoostParams,
}

impl ModelParams {
    /// Apply one `model.field=value` override, e.g. `rforest.n_trees=200`.
    pub fn set(&mut self, assignment: &str) -> Result<(), String> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| format!("override `{assignment}` is not key=value"))?;
        let (model, field) = key
            .trim()
            .split_once('.')
            .ok_or_else(|| format!("override key `{key}` is not model.field"))?;
        let value = value.trim();
        let mut tree = serde_json::to_value(*self).map_err(|e| e.to_string())?;
        let slot = tree
            .get_mut(model)
            .and_then(|m| m.get_mut(field))
            .ok_or_else(|| format!("unknown hyperparameter `{key}`"))?;
        let parsed: serde_json::Value = match value {
            "none" | "null" => serde_json::Value::Null,
            v => serde_json::from_str(v).unwrap_or_else(|_| serde_json::Value::String(v.into())),
        };
        *slot = parsed;
        *self = serde_json::from_value(tree).map_err(|e| format!("bad value for `{key}`: {e}"))?;
        Ok(())
    }
}

/// One trained model of any family.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Logreg(LogisticModel),
    Lda(LdaModel),
    Svm(SvmModel),
    Dtree(DecisionTree),
    Rforest(ForestModel),
    Gnb(GnbModel),
    Knn(KnnModel),
    Xgboost(BoostModel),
}

impl FittedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            FittedModel::Logreg(_) => ModelKind::Logreg,
            FittedModel::Lda(_) => ModelKind::Lda,
            FittedModel::Svm(_) => ModelKind::Svm,
            FittedModel::Dtree(_) => ModelKind::Dtree,
            FittedModel::Rforest(_) => ModelKind::Rforest,
            FittedModel::Gnb(_) => ModelKind::Gnb,
            FittedModel::Knn(_) => ModelKind::Knn,
            FittedModel::Xgboost(_) => ModelKind::Xgboost,
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            FittedModel::Logreg(m) => m,
            FittedModel::Lda(m) => m,
            FittedModel::Svm(m) => m,
            FittedModel::Dtree(m) => m,
            FittedModel::Rforest(m) => m,
            FittedModel::Gnb(m) => m,
            FittedModel::Knn(m) => m,
            FittedModel::Xgboost(m) => m,
        }
    }
}

impl Classifier for FittedModel {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        self.inner().score(x)
    }

    fn predict(&self, x: &[f64], threshold: f64) -> Result<ClassLabel, ModelError> {
        self.inner().predict(x, threshold)
    }
}

/// Fit `kind` on `train`. Only the SVM and the forest draw from `rng`.
pub fn fit_model(
    kind: ModelKind,
    train: &Dataset,
    params: &ModelParams,
    rng: &mut RngStream,
) -> Result<FittedModel, ModelError> {
    Ok(match kind {
        ModelKind::Logreg => FittedModel::Logreg(fit_logistic(train, &params.logreg)?),
        ModelKind::Lda => FittedModel::Lda(fit_lda(train, &params.lda)?),
        ModelKind::Svm => FittedModel::Svm(fit_svm(train, &params.svm, rng)?),
        ModelKind::Dtree => FittedModel::Dtree(fit_tree(train, &params.dtree)?),
        ModelKind::Rforest => FittedModel::Rforest(fit_forest(train, &params.rforest, rng)?),
        ModelKind::Gnb => FittedModel::Gnb(fit_gnb(train, &params.gnb)?),
        ModelKind::Knn => FittedModel::Knn(fit_knn(train, &params.knn)?),
        ModelKind::Xgboost => FittedModel::Xgboost(fit_boost(train, &params.xgboost)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_ids_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.id().parse::<ModelKind>().unwrap(), k);
        }
        assert!("perceptron".parse::<ModelKind>().is_err());
    }

    #[test]
    fn overrides() {
        let mut p = ModelParams::default();
        p.set("rforest.n_trees=25").unwrap();
        p.set("knn.k = 7").unwrap();
        p.set("dtree.max_depth=4").unwrap();
        p.set("dtree.impurity=entropy").unwrap();
        p.set("xgboost.learning_rate=0.1").unwrap();
        assert_eq!(p.rforest.n_trees, 25);
        assert_eq!(p.knn.k, 7);
        assert_eq!(p.dtree.max_depth, Some(4));
        assert_eq!(p.dtree.impurity, crate::tree::Impurity::Entropy);
        assert_eq!(p.xgboost.learning_rate, 0.1);
        p.set("dtree.max_depth=none").unwrap();
        assert_eq!(p.dtree.max_depth, None);
        assert!(p.set("knn.q=1").is_err());
        assert!(p.set("knn.k=abc").is_err());
        assert!(p.set("knn").is_err());
    }

    #[test]
    fn every_kind_fits_and_scores_in_unit_interval() {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i % 7) as f64 / 6.0, (i * 3 % 10) as f64 / 9.0])
            .collect();
        let labels = rows
            .iter()
            .map(|r| ClassLabel::from_bool(r[0] + r[1] > 0.9))
            .collect();
        let d = Dataset::from_rows(vec!["a".into(), "b".into()], &rows, labels).unwrap();
        let mut params = ModelParams::default();
        params.rforest.n_trees = 5;
        params.xgboost.rounds = 5;
        params.logreg.max_iters = 50;
        for kind in ModelKind::ALL {
            let m = fit_model(kind, &d, &params, &mut crate::rng::derive_stream(1, "t")).unwrap();
            assert_eq!(m.kind(), kind);
            for x in d.rows() {
                let s = m.score(x).unwrap();
                assert!((0.0..=1.0).contains(&s), "{kind}: {s}");
            }
            assert!(m.score(&[0.0]).is_err());
        }
    }
}
