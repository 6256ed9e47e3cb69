//! Framingham CSV ingestion, cleaning, min-max scaling, train/test splitting
//! and random class rebalancing.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, Dataset};
use crate::error::DataError;
use crate::rng::RngStream;

/// The sixteen Framingham columns, label last.
pub const FRAMINGHAM_COLUMNS: [&str; 16] = [
    "male",
    "age",
    "education",
    "currentSmoker",
    "cigsPerDay",
    "BPMeds",
    "prevalentStroke",
    "prevalentHyp",
    "diabetes",
    "totChol",
    "sysBP",
    "diaBP",
    "BMI",
    "heartRate",
    "glucose",
    "TenYearCHD",
];

pub const LABEL_COLUMN: &str = "TenYearCHD";

/// Parsed CSV in canonical column order. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    rows: Vec<[Option<f64>; 16]>,
}

impl RawTable {
    pub fn from_rows(rows: Vec<[Option<f64>; 16]>) -> Self {
        Self { rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[[Option<f64>; 16]] {
        &self.rows
    }

    pub fn column_names(&self) -> &'static [&'static str; 16] {
        &FRAMINGHAM_COLUMNS
    }

    pub fn missing_total(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|c| c.is_none()).count())
            .sum()
    }
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<RawTable, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_csv(file)
}

/// Parse RFC-4180 CSV with a header row. Columns may appear in any order and
/// extra columns are ignored; empty cells and `NA` are missing.
pub fn parse_csv(reader: impl Read) -> Result<RawTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(DataError::EmptyFile),
    };
    let header: Vec<&str> = header.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    let mut positions = [0usize; 16];
    for (slot, name) in positions.iter_mut().zip(FRAMINGHAM_COLUMNS) {
        *slot = header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| DataError::MissingColumn(name.to_owned()))?;
    }

    let mut rows = Vec::new();
    for (row_idx, record) in records.enumerate() {
        let record = record?;
        let mut row = [None; 16];
        for (k, &pos) in positions.iter().enumerate() {
            let raw = record.get(pos).unwrap_or("");
            let cell = parse_cell(raw).ok_or_else(|| DataError::UnparseableCell {
                row: row_idx,
                column: FRAMINGHAM_COLUMNS[k].to_owned(),
                value: raw.to_owned(),
            })?;
            if k == 15 {
                if let Some(v) = cell {
                    if v != 0.0 && v != 1.0 {
                        return Err(DataError::UnparseableCell {
                            row: row_idx,
                            column: LABEL_COLUMN.to_owned(),
                            value: raw.to_owned(),
                        });
                    }
                }
            }
            row[k] = cell;
        }
        rows.push(row);
    }
    Ok(RawTable { rows })
}

// Some(None) = missing, Some(Some(v)) = value, None = garbage.
fn parse_cell(raw: &str) -> Option<Option<f64>> {
    if raw.is_empty() || raw == "NA" {
        return Some(None);
    }
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(Some(v)),
        _ => None,
    }
}

/// Per-column missing counts; columns without missing cells are omitted.
pub fn missing_counts(table: &RawTable) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for row in &table.rows {
        for (k, cell) in row.iter().enumerate() {
            if cell.is_none() {
                *counts.entry(FRAMINGHAM_COLUMNS[k].to_owned()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Drop every row with a missing cell; the first fifteen columns become
/// features and `TenYearCHD` the label. Row order is preserved.
pub fn drop_missing(table: &RawTable) -> Result<Dataset, DataError> {
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for row in &table.rows {
        if row.iter().any(Option::is_none) {
            continue;
        }
        values.extend(row[..15].iter().map(|c| c.unwrap()));
        labels.push(ClassLabel::from_value(row[15].unwrap())?);
    }
    if labels.is_empty() {
        return Err(DataError::AllRowsDropped);
    }
    let names = FRAMINGHAM_COLUMNS[..15]
        .iter()
        .map(|s| (*s).to_owned())
        .collect();
    Dataset::new(names, values, labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub feature_names: Vec<String>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

pub fn fit_scaler(train: &Dataset) -> Result<ScalerParams, DataError> {
    if train.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let n = train.n_features();
    let mut min = vec![f64::INFINITY; n];
    let mut max = vec![f64::NEG_INFINITY; n];
    for row in train.rows() {
        for j in 0..n {
            min[j] = min[j].min(row[j]);
            max[j] = max[j].max(row[j]);
        }
    }
    Ok(ScalerParams {
        feature_names: train.feature_names().to_vec(),
        min,
        max,
    })
}

impl ScalerParams {
    /// Min-max map of one value of feature `j`. Constant features map to 0
    /// and out-of-range values are clamped to [0, 1].
    pub fn scale_value(&self, j: usize, x: f64) -> f64 {
        let (lo, hi) = (self.min[j], self.max[j]);
        if hi <= lo {
            return 0.0;
        }
        ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

pub fn apply_scaler(params: &ScalerParams, data: &Dataset) -> Result<Dataset, DataError> {
    if params.feature_names != data.feature_names() {
        return Err(DataError::FeatureMismatch {
            expected: params.feature_names.clone(),
            got: data.feature_names().to_vec(),
        });
    }
    Ok(data.map_values(|j, v| params.scale_value(j, v)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub ratio: f64,
    /// Source row of each training row, in training order.
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Number of training rows for `rows` at `ratio`: floor, remainder to test.
pub fn train_size(rows: usize, ratio: f64) -> usize {
    (ratio * rows as f64).floor() as usize
}

/// Shuffle row indices uniformly and send the first `floor(ratio * m)` to
/// training.
pub fn split(data: &Dataset, ratio: f64, rng: &mut RngStream) -> Result<DataSplit, DataError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(DataError::InvalidRatio(ratio));
    }
    let m = data.n_rows();
    let k = train_size(m, ratio);
    if k == 0 || k >= m {
        return Err(DataError::DegenerateSplit { rows: m, ratio });
    }
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let test_indices = perm.split_off(k);
    Ok(DataSplit {
        train: data.subset(&perm),
        test: data.subset(&test_indices),
        ratio,
        train_indices: perm,
        test_indices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resample {
    None,
    Under,
    Over,
}

impl Resample {
    pub fn name(self) -> &'static str {
        match self {
            Resample::None => "none",
            Resample::Under => "under",
            Resample::Over => "over",
        }
    }

    pub fn apply(self, data: &Dataset, rng: &mut RngStream) -> Result<Dataset, DataError> {
        match self {
            Resample::None => Ok(data.clone()),
            Resample::Under => undersample(data, rng),
            Resample::Over => oversample(data, rng),
        }
    }
}

impl std::str::FromStr for Resample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Resample::None),
            "under" => Ok(Resample::Under),
            "over" => Ok(Resample::Over),
            other => Err(format!("unknown resampling mode `{other}` (none|under|over)")),
        }
    }
}

impl std::fmt::Display for Resample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn class_indices(data: &Dataset) -> Result<(Vec<usize>, Vec<usize>), DataError> {
    let (mut neg, mut pos) = (Vec::new(), Vec::new());
    for (i, l) in data.labels().iter().enumerate() {
        match l {
            ClassLabel::Negative => neg.push(i),
            ClassLabel::Positive => pos.push(i),
        }
    }
    if neg.is_empty() || pos.is_empty() {
        return Err(DataError::SingleClass);
    }
    Ok((neg, pos))
}

/// Subsample the majority class without replacement down to the minority
/// count. Kept rows stay in their original order.
pub fn undersample(data: &Dataset, rng: &mut RngStream) -> Result<Dataset, DataError> {
    let (neg, pos) = class_indices(data)?;
    if neg.len() == pos.len() {
        return Ok(data.clone());
    }
    let (majority, minority) = if neg.len() > pos.len() {
        (neg, pos)
    } else {
        (pos, neg)
    };
    let mut keep: Vec<usize> = index::sample(rng, majority.len(), minority.len())
        .into_iter()
        .map(|k| majority[k])
        .chain(minority)
        .collect();
    keep.sort_unstable();
    Ok(data.subset(&keep))
}

/// Append minority rows drawn with replacement until the classes match.
/// Every original row is kept, in place.
pub fn oversample(data: &Dataset, rng: &mut RngStream) -> Result<Dataset, DataError> {
    let (neg, pos) = class_indices(data)?;
    let (majority, minority) = if neg.len() >= pos.len() {
        (neg, pos)
    } else {
        (pos, neg)
    };
    let extra = majority.len() - minority.len();
    let rows: Vec<usize> = (0..data.n_rows())
        .chain((0..extra).map(|_| minority[rng.random_range(0..minority.len())]))
        .collect();
    Ok(data.subset(&rows))
}
