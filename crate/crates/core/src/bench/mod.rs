//! The end-to-end comparison protocol: clean, split, scale, rebalance, fit
//! every model under every resampling mode, and evaluate on the held-out
//! partition.

mod emit;

pub use emit::{
    emit_all, emit_curves, emit_report, emit_timings, render_csv, render_curve_csv, render_json,
    render_markdown, OutputFormat,
};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{fit_model, Classifier, ModelKind, ModelParams, DEFAULT_THRESHOLD};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::{BenchError, DataError, EvalError};
use crate::metrics::{pr_curve, report_from_predictions, roc_curve, ClassReport, Curve};
use crate::pipeline::{
    apply_scaler, drop_missing, fit_scaler, load_csv, missing_counts, split, RawTable, Resample,
};
use crate::rng::derive_stream;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SPLIT: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub data_path: PathBuf,
    pub seed: u64,
    pub split_ratio: f64,
    pub resamples: Vec<Resample>,
    pub models: Vec<ModelKind>,
    pub threshold: f64,
    /// Fit the scaler on the whole cleaned table instead of the training
    /// partition.
    pub scale_on_full: bool,
    /// Rebalance the cleaned table before splitting instead of rebalancing
    /// only the training partition.
    pub resample_before_split: bool,
    pub params: ModelParams,
}

impl BenchConfig {
    /// Defaults: seed 42, 70/30 split, under- and oversampling, all models.
    pub fn new(data_path: impl Into<PathBuf>) -> Self {
        Self {
            data_path: data_path.into(),
            seed: DEFAULT_SEED,
            split_ratio: DEFAULT_SPLIT,
            resamples: vec![Resample::Under, Resample::Over],
            models: ModelKind::ALL.to_vec(),
            threshold: DEFAULT_THRESHOLD,
            scale_on_full: false,
            resample_before_split: false,
            params: ModelParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(BenchError::Config(format!(
                "split ratio must lie strictly between 0 and 1, got {}",
                self.split_ratio
            )));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(BenchError::Config(format!(
                "threshold must lie in [0, 1], got {}",
                self.threshold
            )));
        }
        if self.models.is_empty() {
            return Err(BenchError::Config("no models selected".into()));
        }
        if self.resamples.is_empty() {
            return Err(BenchError::Config("no resampling modes selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub non_chd: usize,
    pub chd: usize,
}

impl From<[usize; 2]> for ClassCounts {
    fn from(c: [usize; 2]) -> Self {
        Self {
            non_chd: c[0],
            chd: c[1],
        }
    }
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.non_chd + self.chd
    }
}

/// Class balance around one resampling mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub resample: Resample,
    /// The rows handed to the resampler: the training partition, or the
    /// whole cleaned table when rebalancing happens before the split.
    pub before_resampling: ClassCounts,
    pub train: ClassCounts,
    pub test: ClassCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub split_ratio: f64,
    pub threshold: f64,
    pub scale_on_full: bool,
    pub resample_before_split: bool,
    pub raw_rows: usize,
    pub missing_counts: BTreeMap<String, usize>,
    pub missing_total: usize,
    pub clean_rows: usize,
    pub clean_counts: ClassCounts,
    pub partitions: Vec<PartitionSummary>,
    pub params: ModelParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    pub report: ClassReport,
    pub roc: Curve,
    pub pr: Curve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Ok(Box<CellMetrics>),
    Failed { error: String },
}

/// One (model, resampling) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub model: ModelKind,
    pub resample: Resample,
    pub outcome: CellOutcome,
}

impl CellResult {
    pub fn metrics(&self) -> Option<&CellMetrics> {
        match &self.outcome {
            CellOutcome::Ok(m) => Some(m),
            CellOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub model: ModelKind,
    pub resample: Resample,
    pub fit_seconds: f64,
    pub eval_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub metadata: RunMetadata,
    /// Resampling-major, models in configured order.
    pub cells: Vec<CellResult>,
    /// Wall-clock timings; kept out of the JSON report so that it is
    /// reproducible byte for byte.
    #[serde(skip)]
    pub timings: Vec<CellTiming>,
}

impl BenchResult {
    pub fn cell(&self, model: ModelKind, resample: Resample) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.model == model && c.resample == resample)
    }

    pub fn metrics(&self, model: ModelKind, resample: Resample) -> Option<&CellMetrics> {
        self.cell(model, resample).and_then(CellResult::metrics)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.metrics().is_none())
    }

    pub fn is_complete(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Load `config.data_path` and run the protocol on it.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchResult, BenchError> {
    config.validate()?;
    let table = load_csv(&config.data_path)?;
    run_on_table(&table, config)
}

/// Run the protocol on an already parsed table. Data-stage failures abort
/// the run; a model that fails to fit or score is recorded as a failed cell.
pub fn run_on_table(table: &RawTable, config: &BenchConfig) -> Result<BenchResult, BenchError> {
    config.validate()?;
    let missing = missing_counts(table);
    let clean = drop_missing(table)?;
    let prepared = config
        .resamples
        .iter()
        .map(|&r| prepare(&clean, r, config))
        .collect::<Result<Vec<_>, _>>()?;

    let jobs: Vec<(&Prepared, ModelKind)> = prepared
        .iter()
        .flat_map(|p| config.models.iter().map(move |&k| (p, k)))
        .collect();
    let (cells, timings): (Vec<_>, Vec<_>) = jobs
        .par_iter()
        .map(|&(p, kind)| run_cell(p, kind, config))
        .unzip();

    Ok(BenchResult {
        metadata: RunMetadata {
            seed: config.seed,
            split_ratio: config.split_ratio,
            threshold: config.threshold,
            scale_on_full: config.scale_on_full,
            resample_before_split: config.resample_before_split,
            raw_rows: table.n_rows(),
            missing_total: missing.values().sum(),
            missing_counts: missing,
            clean_rows: clean.n_rows(),
            clean_counts: clean.class_counts().into(),
            partitions: prepared.into_iter().map(|p| p.summary).collect(),
            params: config.params,
        },
        cells,
        timings,
    })
}

struct Prepared {
    summary: PartitionSummary,
    train: Dataset,
    test: Dataset,
}

fn prepare(clean: &Dataset, resample: Resample, config: &BenchConfig) -> Result<Prepared, DataError> {
    // the split stream is shared by every mode so they see the same test rows
    let mut split_rng = derive_stream(config.seed, "split");
    let mut resample_rng = derive_stream(config.seed, &format!("resample/{resample}"));
    let (train, test, before, scaler_source) = if config.resample_before_split {
        let balanced = resample.apply(clean, &mut resample_rng)?;
        let s = split(&balanced, config.split_ratio, &mut split_rng)?;
        let scaler_source = s.train.clone();
        (s.train, s.test, clean.class_counts(), scaler_source)
    } else {
        let s = split(clean, config.split_ratio, &mut split_rng)?;
        let before = s.train.class_counts();
        let train = resample.apply(&s.train, &mut resample_rng)?;
        (train, s.test, before, s.train)
    };
    let scaler = if config.scale_on_full {
        fit_scaler(clean)?
    } else {
        fit_scaler(&scaler_source)?
    };
    let train = apply_scaler(&scaler, &train)?;
    let test = apply_scaler(&scaler, &test)?;
    Ok(Prepared {
        summary: PartitionSummary {
            resample,
            before_resampling: before.into(),
            train: train.class_counts().into(),
            test: test.class_counts().into(),
        },
        train,
        test,
    })
}

fn run_cell(p: &Prepared, kind: ModelKind, config: &BenchConfig) -> (CellResult, CellTiming) {
    let resample = p.summary.resample;
    let mut rng = derive_stream(config.seed, &format!("fit/{kind}/{resample}"));
    let start = Instant::now();
    let fitted = fit_model(kind, &p.train, &config.params, &mut rng);
    let fit_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let outcome = fitted
        .map_err(BenchError::from)
        .and_then(|m| evaluate(&m, &p.test, config.threshold));
    let eval_seconds = start.elapsed().as_secs_f64();
    let outcome = match outcome {
        Ok(m) => CellOutcome::Ok(Box::new(m)),
        Err(e) => CellOutcome::Failed {
            error: e.to_string(),
        },
    };
    (
        CellResult {
            model: kind,
            resample,
            outcome,
        },
        CellTiming {
            model: kind,
            resample,
            fit_seconds,
            eval_seconds,
        },
    )
}

/// Score and classify every test row, then build the class report and the
/// ROC and precision-recall curves.
pub fn evaluate(
    model: &dyn Classifier,
    test: &Dataset,
    threshold: f64,
) -> Result<CellMetrics, BenchError> {
    let mut scores = Vec::with_capacity(test.n_rows());
    let mut predicted = Vec::with_capacity(test.n_rows());
    for x in test.rows() {
        let s = model.score(x)?;
        if !(0.0..=1.0).contains(&s) {
            return Err(EvalError::ScoreOutOfRange(s).into());
        }
        scores.push(s);
        predicted.push(model.predict(x, threshold)?);
    }
    let truth: &[ClassLabel] = test.labels();
    Ok(CellMetrics {
        report: report_from_predictions(truth, &predicted)?,
        roc: roc_curve(truth, &scores)?,
        pr: pr_curve(truth, &scores)?,
    })
}
