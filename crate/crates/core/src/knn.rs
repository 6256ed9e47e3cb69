//! Brute-force K-nearest-neighbours under the Euclidean distance.

use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub train: Dataset,
    pub k: usize,
}

pub fn l2_distance(a: &[f64], b: &[f64]) -> Result<f64, ModelError> {
    check_dim(a.len(), b)?;
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

pub fn fit_knn(train: &Dataset, params: &KnnParams) -> Result<KnnModel, ModelError> {
    if train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if params.k == 0 {
        return Err(ModelError::InvalidHyperparameter("K must be ≥ 1".into()));
    }
    if params.k > train.n_rows() {
        return Err(ModelError::KTooLarge {
            k: params.k,
            rows: train.n_rows(),
        });
    }
    Ok(KnnModel {
        train: train.clone(),
        k: params.k,
    })
}

impl KnnModel {
    /// Training-row indices of the K nearest neighbours, nearest first;
    /// equal distances are ordered by row index.
    pub fn neighbours(&self, x: &[f64]) -> Result<Vec<usize>, ModelError> {
        check_dim(self.train.n_features(), x)?;
        if self.k > self.train.n_rows() {
            return Err(ModelError::KTooLarge {
                k: self.k,
                rows: self.train.n_rows(),
            });
        }
        let mut dist: Vec<(f64, usize)> = self
            .train
            .rows()
            .enumerate()
            .map(|(i, r)| (l2_distance(r, x).expect("dimensions checked"), i))
            .collect();
        let by_distance_then_index =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < dist.len() {
            dist.select_nth_unstable_by(self.k - 1, by_distance_then_index);
            dist.truncate(self.k);
        }
        dist.sort_unstable_by(by_distance_then_index);
        Ok(dist.into_iter().map(|(_, i)| i).collect())
    }
}

/// Positive fraction among the K nearest rows, and the majority class
/// (vote tie → 0).
pub fn knn_predict(model: &KnnModel, x: &[f64]) -> Result<(f64, ClassLabel), ModelError> {
    let nn = model.neighbours(x)?;
    let votes = nn
        .iter()
        .filter(|&&i| model.train.label(i).is_positive())
        .count();
    Ok((
        votes as f64 / model.k as f64,
        ClassLabel::from_bool(2 * votes > model.k),
    ))
}

impl Classifier for KnnModel {
    fn n_features(&self) -> usize {
        self.train.n_features()
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(knn_predict(self, x)?.0)
    }

    /// Majority vote at the default threshold, vote fraction otherwise.
    fn predict(&self, x: &[f64], threshold: f64) -> Result<ClassLabel, ModelError> {
        let (score, class) = knn_predict(self, x)?;
        Ok(if threshold == 0.5 {
            class
        } else {
            ClassLabel::from_bool(score >= threshold)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_values() {
        assert_eq!(l2_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(l2_distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(l2_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    fn fixture() -> Dataset {
        Dataset::from_slices(
            &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[5.0, 5.0], &[6.0, 5.0], &[5.0, 6.0]],
            &[0, 0, 1, 1, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn k1_is_nearest_label() {
        let m = fit_knn(&fixture(), &KnnParams { k: 1 }).unwrap();
        assert_eq!(knn_predict(&m, &[0.1, 0.9]).unwrap(), (1.0, ClassLabel::Positive));
        assert_eq!(knn_predict(&m, &[0.9, 0.1]).unwrap(), (0.0, ClassLabel::Negative));
    }

    #[test]
    fn k_all_is_global_majority() {
        let d = Dataset::from_slices(&[&[0.0], &[1.0], &[2.0], &[3.0], &[4.0]], &[0, 1, 1, 0, 1])
            .unwrap();
        let m = fit_knn(&d, &KnnParams { k: 5 }).unwrap();
        for x in [-10.0, 0.0, 2.5, 100.0] {
            assert_eq!(knn_predict(&m, &[x]).unwrap().1, ClassLabel::Positive);
        }
    }

    #[test]
    fn distance_ties_prefer_lower_index() {
        let d = Dataset::from_slices(&[&[-1.0], &[1.0], &[3.0]], &[0, 1, 1]).unwrap();
        let m = fit_knn(&d, &KnnParams { k: 1 }).unwrap();
        assert_eq!(m.neighbours(&[0.0]).unwrap(), vec![0]);
        let m = fit_knn(&d, &KnnParams { k: 2 }).unwrap();
        // one vote each: tie → class 0
        assert_eq!(knn_predict(&m, &[0.0]).unwrap(), (0.5, ClassLabel::Negative));
        assert_eq!(m.predict(&[0.0], 0.5).unwrap(), ClassLabel::Negative);
    }

    #[test]
    fn k_too_large() {
        assert_eq!(
            fit_knn(&fixture(), &KnnParams { k: 7 }),
            Err(ModelError::KTooLarge { k: 7, rows: 6 })
        );
        let mut m = fit_knn(&fixture(), &KnnParams { k: 3 }).unwrap();
        m.k = 9;
        assert!(matches!(
            knn_predict(&m, &[0.0, 0.0]),
            Err(ModelError::KTooLarge { .. })
        ));
    }
}
