use std::path::PathBuf;

use thiserror::Error;

/// Failures while reading, cleaning or reshaping tabular data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("input file is empty")]
    EmptyFile,
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("cannot parse cell at row {row}, column `{column}`: {value:?}")]
    UnparseableCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("every row contains at least one missing value")]
    AllRowsDropped,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("feature layout does not match the fitted scaler: expected {expected:?}, got {got:?}")]
    FeatureMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("split ratio {0} must lie strictly between 0 and 1")]
    InvalidRatio(f64),
    #[error("split of {rows} rows at ratio {ratio} leaves one side empty")]
    DegenerateSplit { rows: usize, ratio: f64 },
    #[error("resampling needs both classes present")]
    SingleClass,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("label {0} is not 0 or 1")]
    InvalidLabel(f64),
    #[error("non-finite feature value at row {row}, feature {feature}")]
    NonFinite { row: usize, feature: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Failures while fitting or querying a classifier.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("class {class} has {rows} rows, need at least {needed}")]
    TooFewRows {
        class: u8,
        rows: usize,
        needed: usize,
    },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("loss became non-finite at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },
    #[error("pooled covariance is not positive definite")]
    SingularCovariance,
    #[error("K = {k} exceeds the {rows} stored training rows")]
    KTooLarge { k: usize, rows: usize },
    #[error("impurity of an empty node is undefined")]
    EmptyNode,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
}

/// Failures while computing evaluation metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {truth} labels vs {other} predictions")]
    LengthMismatch { truth: usize, other: usize },
    #[error("no samples to evaluate")]
    Empty,
    #[error("ROC needs both classes in the ground truth")]
    SingleClassTruth,
    #[error("precision-recall needs at least one positive")]
    NoPositives,
    #[error("score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),
}

/// Failures of the benchmark harness as a whole.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    UnwritableOutput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
