//! From-scratch binary classifiers for ten-year coronary heart disease risk,
//! with the data pipeline and evaluation harness that compares them.
//!
//! Every model implements [`Classifier`]: scores lie in `[0, 1]` and class 1
//! is predicted when the score reaches the threshold. [`bench::run_benchmark`]
//! runs the whole protocol (clean, split, scale, rebalance, fit, evaluate) and
//! [`bench::emit_report`] writes Markdown, JSON and CSV reports.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod bayes;
pub mod bench;
pub mod classifier;
pub mod dataset;
pub mod error;
pub mod knn;
pub mod linear;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod svm;
pub mod synthetic;
pub mod tree;

pub use classifier::{fit_model, Classifier, FittedModel, ModelKind, ModelParams, DEFAULT_THRESHOLD};
pub use dataset::{ClassLabel, Dataset};
pub use error::{BenchError, DataError, EvalError, ModelError};
pub use pipeline::Resample;
pub use rng::{derive_stream, RngStream};
