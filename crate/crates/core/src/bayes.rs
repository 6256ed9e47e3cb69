//! Gaussian naive Bayes with log-domain posteriors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnbParams {
    pub variance_floor: f64,
}

impl Default for GnbParams {
    fn default() -> Self {
        Self {
            variance_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
    pub priors: [f64; 2],
    pub variance_floor: f64,
}

/// Per-class feature means, population variances floored at
/// `variance_floor`, and class-frequency priors.
pub fn fit_gnb(train: &Dataset, params: &GnbParams) -> Result<GnbModel, ModelError> {
    let counts = train.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(ModelError::SingleClass);
    }
    if params.variance_floor.is_nan() || params.variance_floor <= 0.0 {
        return Err(ModelError::InvalidHyperparameter(
            "variance_floor must be > 0".into(),
        ));
    }
    let n = train.n_features();
    let mut means = [vec![0.0; n], vec![0.0; n]];
    for (x, y) in train.rows().zip(train.labels()) {
        for (acc, v) in means[y.index()].iter_mut().zip(x) {
            *acc += v;
        }
    }
    for c in 0..2 {
        means[c].iter_mut().for_each(|v| *v /= counts[c] as f64);
    }
    let mut variances = [vec![0.0; n], vec![0.0; n]];
    for (x, y) in train.rows().zip(train.labels()) {
        let c = y.index();
        for j in 0..n {
            let d = x[j] - means[c][j];
            variances[c][j] += d * d;
        }
    }
    for c in 0..2 {
        for v in variances[c].iter_mut() {
            *v = (*v / counts[c] as f64).max(params.variance_floor);
        }
    }
    let m = train.n_rows() as f64;
    Ok(GnbModel {
        means,
        variances,
        priors: [counts[0] as f64 / m, counts[1] as f64 / m],
        variance_floor: params.variance_floor,
    })
}

impl GnbModel {
    /// `ln p(x|c) + ln p(c)`, up to the shared evidence term.
    pub fn joint_log_likelihood(&self, x: &[f64], class: ClassLabel) -> Result<f64, ModelError> {
        check_dim(self.means[0].len(), x)?;
        let c = class.index();
        let ll: f64 = x
            .iter()
            .zip(&self.means[c])
            .zip(&self.variances[c])
            .map(|((xi, mu), var)| {
                let d = xi - mu;
                -0.5 * (2.0 * PI * var).ln() - d * d / (2.0 * var)
            })
            .sum();
        Ok(ll + self.priors[c].ln())
    }
}

/// Normalised posteriors `(p0, p1)`, computed by log-sum-exp.
pub fn gnb_posterior(model: &GnbModel, x: &[f64]) -> Result<(f64, f64), ModelError> {
    let l0 = model.joint_log_likelihood(x, ClassLabel::Negative)?;
    let l1 = model.joint_log_likelihood(x, ClassLabel::Positive)?;
    Ok(normalise_log_pair(l0, l1))
}

fn normalise_log_pair(l0: f64, l1: f64) -> (f64, f64) {
    let top = l0.max(l1);
    let (e0, e1) = ((l0 - top).exp(), (l1 - top).exp());
    let z = e0 + e1;
    (e0 / z, e1 / z)
}

/// Argmax of the posterior; tie → class 0.
pub fn gnb_predict(model: &GnbModel, x: &[f64]) -> Result<ClassLabel, ModelError> {
    let (p0, p1) = gnb_posterior(model, x)?;
    Ok(ClassLabel::from_bool(p1 > p0))
}

impl Classifier for GnbModel {
    fn n_features(&self) -> usize {
        self.means[0].len()
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(gnb_posterior(self, x)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(mu: [f64; 2], var: [f64; 2], priors: [f64; 2]) -> GnbModel {
        GnbModel {
            means: [vec![mu[0]], vec![mu[1]]],
            variances: [vec![var[0]], vec![var[1]]],
            priors,
            variance_floor: 1e-9,
        }
    }

    #[test]
    fn fit_moments_and_priors() {
        let d = Dataset::from_slices(
            &[&[0.0, 5.0], &[2.0, 5.0], &[1.0, 5.0], &[3.0, 5.0]],
            &[0, 0, 1, 1],
        )
        .unwrap();
        let m = fit_gnb(&d, &GnbParams::default()).unwrap();
        assert_eq!(m.means[0], vec![1.0, 5.0]);
        assert_eq!(m.variances[0][0], 1.0);
        assert_eq!(m.variances[0][1], 1e-9);
        assert_eq!(m.priors, [0.5, 0.5]);

        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let labels: Vec<u8> = (0..40).map(|i| u8::from(i >= 30)).collect();
        let d = Dataset::from_slices(&refs, &labels).unwrap();
        assert_eq!(fit_gnb(&d, &GnbParams::default()).unwrap().priors, [0.75, 0.25]);
    }

    #[test]
    fn posterior_fixtures() {
        let (p0, p1) = gnb_posterior(&model([0.0, 0.0], [1.0, 1.0], [0.5, 0.5]), &[0.7]).unwrap();
        assert_eq!((p0, p1), (0.5, 0.5));
        let (p0, p1) = gnb_posterior(&model([0.0, 0.0], [1.0, 1.0], [0.9, 0.1]), &[0.7]).unwrap();
        assert!((p0 - 0.9).abs() < 1e-15 && (p1 - 0.1).abs() < 1e-15);
        let (_, p1) = gnb_posterior(&model([0.0, 1.0], [1.0, 1.0], [0.5, 0.5]), &[1.0]).unwrap();
        assert!((p1 - 1.0 / (1.0 + (-0.5f64).exp())).abs() < 1e-15);
        assert!((p1 - 0.6225).abs() < 1e-4);
    }

    #[test]
    fn extreme_inputs_stay_normalised() {
        let m = model([0.0, 1.0], [1e-9, 1e-9], [0.5, 0.5]);
        let (p0, p1) = gnb_posterior(&m, &[1e6]).unwrap();
        assert!(p0.is_finite() && p1.is_finite());
        assert_eq!(p0 + p1, 1.0);
        assert_eq!(p1, 1.0);
    }

    #[test]
    fn predict_tie_break() {
        let m = model([0.0, 0.0], [1.0, 1.0], [0.5, 0.5]);
        assert_eq!(gnb_predict(&m, &[0.3]).unwrap(), ClassLabel::Negative);
        let m = model([0.0, 1.0], [1.0, 1.0], [0.5, 0.5]);
        assert_eq!(gnb_predict(&m, &[0.9]).unwrap(), ClassLabel::Positive);
        assert!(gnb_predict(&m, &[0.9, 1.0]).is_err());
    }

    #[test]
    fn single_class_rejected() {
        let d = Dataset::from_slices(&[&[0.0], &[1.0]], &[0, 0]).unwrap();
        assert_eq!(fit_gnb(&d, &GnbParams::default()), Err(ModelError::SingleClass));
    }
}
