use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// Binary class label. `Negative` is Non-CHD (0), `Positive` is CHD (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Negative,
    Positive,
}

impl ClassLabel {
    pub const BOTH: [ClassLabel; 2] = [ClassLabel::Negative, ClassLabel::Positive];

    pub fn from_bool(positive: bool) -> Self {
        if positive {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        }
    }

    pub fn from_value(v: f64) -> Result<Self, DataError> {
        if v == 0.0 {
            Ok(ClassLabel::Negative)
        } else if v == 1.0 {
            Ok(ClassLabel::Positive)
        } else {
            Err(DataError::InvalidLabel(v))
        }
    }

    pub fn index(self) -> usize {
        match self {
            ClassLabel::Negative => 0,
            ClassLabel::Positive => 1,
        }
    }

    pub fn value(self) -> f64 {
        self.index() as f64
    }

    pub fn is_positive(self) -> bool {
        self == ClassLabel::Positive
    }

    pub fn other(self) -> Self {
        match self {
            ClassLabel::Negative => ClassLabel::Positive,
            ClassLabel::Positive => ClassLabel::Negative,
        }
    }

    /// Display name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Negative => "Non-CHD",
            ClassLabel::Positive => "CHD",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense feature matrix (row-major) with named columns and binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<ClassLabel>,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        values: Vec<f64>,
        labels: Vec<ClassLabel>,
    ) -> Result<Self, DataError> {
        let n = feature_names.len();
        if n == 0 {
            return Err(DataError::Shape("dataset needs at least one feature".into()));
        }
        if values.len() != n * labels.len() {
            return Err(DataError::Shape(format!(
                "{} values do not fill {} rows of {} features",
                values.len(),
                labels.len(),
                n
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DataError::NonFinite {
                row: pos / n,
                feature: pos % n,
            });
        }
        Ok(Self {
            feature_names,
            values,
            labels,
        })
    }

    pub fn from_rows(
        feature_names: Vec<String>,
        rows: &[Vec<f64>],
        labels: Vec<ClassLabel>,
    ) -> Result<Self, DataError> {
        let n = feature_names.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(DataError::Shape(format!(
                "row of length {} in a {}-feature dataset",
                bad.len(),
                n
            )));
        }
        if rows.len() != labels.len() {
            return Err(DataError::Shape(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        Self::new(feature_names, rows.concat(), labels)
    }

    /// Shorthand for fixtures: features named `x0..`, labels given as 0/1.
    pub fn from_slices(rows: &[&[f64]], labels: &[u8]) -> Result<Self, DataError> {
        let n = rows.first().map_or(0, |r| r.len());
        let names = (0..n).map(|j| format!("x{j}")).collect();
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        let labels = labels
            .iter()
            .map(|&l| ClassLabel::from_value(f64::from(l)))
            .collect::<Result<_, _>>()?;
        Self::from_rows(names, &rows, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_features();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_features())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_features() + j]
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.labels[i]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    /// `[negatives, positives]`
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|l| l.is_positive()).count();
        [self.labels.len() - pos, pos]
    }

    /// Rows at `indices`, in that order; repeats allowed.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let n = self.n_features();
        let mut values = Vec::with_capacity(indices.len() * n);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            feature_names: self.feature_names.clone(),
            values,
            labels,
        }
    }

    /// Same rows and labels with every cell passed through `f(feature, value)`.
    pub fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> Dataset {
        let n = self.n_features();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(k % n, v))
            .collect();
        Dataset {
            feature_names: self.feature_names.clone(),
            values,
            labels: self.labels.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let err = Dataset::from_rows(
            vec!["a".into(), "b".into()],
            &[vec![1.0, 2.0], vec![3.0]],
            vec![ClassLabel::Negative, ClassLabel::Positive],
        );
        assert!(matches!(err, Err(DataError::Shape(_))));
    }

    #[test]
    fn rejects_label_count_mismatch() {
        let err = Dataset::from_rows(
            vec!["a".into()],
            &[vec![1.0], vec![2.0]],
            vec![ClassLabel::Negative],
        );
        assert!(matches!(err, Err(DataError::Shape(_))));
    }

    #[test]
    fn rejects_non_finite() {
        let err = Dataset::from_slices(&[&[1.0, f64::NAN]], &[0]);
        assert!(matches!(
            err,
            Err(DataError::NonFinite { row: 0, feature: 1 })
        ));
    }

    #[test]
    fn rejects_labels_outside_zero_one() {
        assert!(matches!(
            Dataset::from_slices(&[&[1.0]], &[2]),
            Err(DataError::InvalidLabel(_))
        ));
    }

    #[test]
    fn subset_and_counts() {
        let d = Dataset::from_slices(&[&[0.0], &[1.0], &[2.0]], &[0, 1, 1]).unwrap();
        assert_eq!(d.class_counts(), [1, 2]);
        let s = d.subset(&[2, 2, 0]);
        assert_eq!(s.row(0), &[2.0]);
        assert_eq!(s.row(2), &[0.0]);
        assert_eq!(s.class_counts(), [1, 2]);
    }
}
