//! Logistic regression trained by full-batch gradient descent, and linear
//! discriminant analysis with a pooled, ridge-stabilised covariance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier};
use crate::dataset::{ClassLabel, Dataset};
use crate::error::ModelError;

/// Logistic function, evaluated without overflow for any finite `z`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub learning_rate: f64,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iters: 5000,
            tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub params: LogisticParams,
    /// Mean log-loss before the first step and after every step.
    pub loss_trace: Vec<f64>,
}

/// Mean log-loss of `σ(w·x + b)` over `data`.
pub fn log_loss(weights: &[f64], bias: f64, data: &Dataset) -> f64 {
    let total: f64 = data
        .rows()
        .zip(data.labels())
        .map(|(x, y)| softplus(dot(weights, x) + bias) - y.value() * (dot(weights, x) + bias))
        .sum();
    total / data.n_rows() as f64
}

/// Gradient of [`log_loss`] as `(d/dw, d/db)`.
pub fn log_loss_gradient(weights: &[f64], bias: f64, data: &Dataset) -> (Vec<f64>, f64) {
    let m = data.n_rows() as f64;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (x, y) in data.rows().zip(data.labels()) {
        let r = sigmoid(dot(weights, x) + bias) - y.value();
        for (g, xi) in gw.iter_mut().zip(x) {
            *g += r * xi;
        }
        gb += r;
    }
    gw.iter_mut().for_each(|g| *g /= m);
    (gw, gb / m)
}

pub fn fit_logistic(train: &Dataset, params: &LogisticParams) -> Result<LogisticModel, ModelError> {
    if train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if !(params.learning_rate > 0.0 && params.learning_rate.is_finite()) {
        return Err(ModelError::InvalidHyperparameter(format!(
            "learning_rate = {}",
            params.learning_rate
        )));
    }
    let mut weights = vec![0.0; train.n_features()];
    let mut bias = 0.0;
    let mut loss = log_loss(&weights, bias, train);
    let mut loss_trace = vec![loss];
    for iteration in 0..params.max_iters {
        let (gw, gb) = log_loss_gradient(&weights, bias, train);
        for (w, g) in weights.iter_mut().zip(&gw) {
            *w -= params.learning_rate * g;
        }
        bias -= params.learning_rate * gb;
        let next = log_loss(&weights, bias, train);
        if !next.is_finite() {
            return Err(ModelError::NonFiniteLoss { iteration });
        }
        loss_trace.push(next);
        let change = (loss - next).abs();
        loss = next;
        if change < params.tolerance {
            break;
        }
    }
    Ok(LogisticModel {
        weights,
        bias,
        params: *params,
        loss_trace,
    })
}

pub fn logistic_score(model: &LogisticModel, x: &[f64]) -> Result<f64, ModelError> {
    check_dim(model.weights.len(), x)?;
    Ok(sigmoid(dot(&model.weights, x) + model.bias))
}

impl Classifier for LogisticModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        logistic_score(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub ridge: f64,
}

impl Default for LdaParams {
    fn default() -> Self {
        Self { ridge: 1e-6 }
    }
}

/// Fitted LDA. Σ⁻¹μ_c and μ_cᵀΣ⁻¹μ_c are cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub means: [Vec<f64>; 2],
    /// Pooled covariance with the ridge already added, row-major n×n.
    pub covariance: Vec<f64>,
    pub priors: [f64; 2],
    pub ridge: f64,
    precision_means: [Vec<f64>; 2],
    quad_terms: [f64; 2],
}

impl LdaModel {
    /// Build from explicit parameters. `covariance` is used as given.
    pub fn from_parts(
        means: [Vec<f64>; 2],
        covariance: Vec<f64>,
        priors: [f64; 2],
        ridge: f64,
    ) -> Result<Self, ModelError> {
        let n = means[0].len();
        if means[1].len() != n || covariance.len() != n * n {
            return Err(ModelError::DimensionMismatch {
                expected: n,
                got: means[1].len(),
            });
        }
        if !(priors[0] > 0.0 && priors[1] > 0.0 && (priors[0] + priors[1] - 1.0).abs() < 1e-12) {
            return Err(ModelError::InvalidHyperparameter(format!(
                "priors {priors:?} must be positive and sum to 1"
            )));
        }
        let sigma = DMatrix::from_row_slice(n, n, &covariance);
        let chol = sigma.cholesky().ok_or(ModelError::SingularCovariance)?;
        let solve = |mu: &[f64]| -> Vec<f64> {
            chol.solve(&DVector::from_column_slice(mu))
                .iter()
                .copied()
                .collect()
        };
        let precision_means = [solve(&means[0]), solve(&means[1])];
        if precision_means.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ModelError::SingularCovariance);
        }
        let quad_terms = [
            dot(&means[0], &precision_means[0]),
            dot(&means[1], &precision_means[1]),
        ];
        Ok(Self {
            means,
            covariance,
            priors,
            ridge,
            precision_means,
            quad_terms,
        })
    }

    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }
}

/// Class means, pooled within-class covariance (denominator m − 2) plus
/// `ridge·I`, and class-frequency priors.
pub fn fit_lda(train: &Dataset, params: &LdaParams) -> Result<LdaModel, ModelError> {
    let counts = train.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(ModelError::SingleClass);
    }
    for (c, &k) in counts.iter().enumerate() {
        if k < 2 {
            return Err(ModelError::TooFewRows {
                class: c as u8,
                rows: k,
                needed: 2,
            });
        }
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
    let mut cov = vec![0.0; n * n];
    let mut centred = vec![0.0; n];
    for (x, y) in train.rows().zip(train.labels()) {
        for j in 0..n {
            centred[j] = x[j] - means[y.index()][j];
        }
        for a in 0..n {
            for b in a..n {
                cov[a * n + b] += centred[a] * centred[b];
            }
        }
    }
    let denom = (train.n_rows() - 2) as f64;
    for a in 0..n {
        for b in a..n {
            let v = cov[a * n + b] / denom;
            cov[a * n + b] = v;
            cov[b * n + a] = v;
        }
        cov[a * n + a] += params.ridge;
    }
    let m = train.n_rows() as f64;
    let priors = [counts[0] as f64 / m, counts[1] as f64 / m];
    LdaModel::from_parts(means, cov, priors, params.ridge)
}

/// `δ_c(x) = xᵀΣ⁻¹μ_c − ½ μ_cᵀΣ⁻¹μ_c + ln π_c`
pub fn lda_discriminant(model: &LdaModel, x: &[f64], class: ClassLabel) -> Result<f64, ModelError> {
    check_dim(model.n_features(), x)?;
    let c = class.index();
    Ok(dot(x, &model.precision_means[c]) - 0.5 * model.quad_terms[c] + model.priors[c].ln())
}

/// Argmax of the two discriminants; an exact tie goes to class 0.
pub fn lda_predict(model: &LdaModel, x: &[f64]) -> Result<ClassLabel, ModelError> {
    let d0 = lda_discriminant(model, x, ClassLabel::Negative)?;
    let d1 = lda_discriminant(model, x, ClassLabel::Positive)?;
    Ok(ClassLabel::from_bool(d1 > d0))
}

impl Classifier for LdaModel {
    fn n_features(&self) -> usize {
        self.means[0].len()
    }

    /// Softmax of the discriminants, i.e. σ(δ₁ − δ₀).
    fn score(&self, x: &[f64]) -> Result<f64, ModelError> {
        let d0 = lda_discriminant(self, x, ClassLabel::Negative)?;
        let d1 = lda_discriminant(self, x, ClassLabel::Positive)?;
        Ok(sigmoid(d1 - d0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert_eq!(sigmoid(1000.0), 1.0);
        assert_eq!(sigmoid(-1000.0), 0.0);
        assert!(sigmoid(-745.0).is_finite());
        for z in [-30.0, -2.5, -0.1, 0.3, 4.0, 17.0] {
            assert!((sigmoid(z) + sigmoid(-z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn softplus_matches_naive_in_range() {
        for z in [-5.0, -0.5, 0.0, 0.5, 5.0] {
            assert!((softplus(z) - (1.0 + f64::exp(z)).ln()).abs() < 1e-14);
        }
        assert_eq!(softplus(1000.0), 1000.0);
    }

    #[test]
    fn score_fixtures() {
        let m = LogisticModel {
            weights: vec![2.0, -1.0],
            bias: 0.5,
            params: LogisticParams::default(),
            loss_trace: vec![],
        };
        let expected = 1.0 / (1.0 + (-1.5f64).exp());
        assert!((logistic_score(&m, &[1.0, 1.0]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.8176).abs() < 1e-4);
        assert_eq!(
            logistic_score(&m, &[1.0]),
            Err(ModelError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        let zero = LogisticModel {
            weights: vec![0.0],
            ..m
        };
        let zero = LogisticModel { bias: 0.0, ..zero };
        assert_eq!(logistic_score(&zero, &[0.0]).unwrap(), 0.5);
    }

    #[test]
    fn zero_iterations_keep_zero_init() {
        let d = Dataset::from_slices(&[&[0.0], &[1.0]], &[0, 1]).unwrap();
        let p = LogisticParams {
            max_iters: 0,
            ..Default::default()
        };
        let m = fit_logistic(&d, &p).unwrap();
        assert_eq!(m.weights, vec![0.0]);
        assert_eq!(m.bias, 0.0);
        assert_eq!(m.score(&[7.0]).unwrap(), 0.5);
    }

    #[test]
    fn separable_pair_is_learned() {
        let d = Dataset::from_slices(&[&[0.0], &[1.0]], &[0, 1]).unwrap();
        let m = fit_logistic(&d, &LogisticParams::default()).unwrap();
        assert_eq!(m.predict(&[0.0], 0.5).unwrap(), ClassLabel::Negative);
        assert_eq!(m.predict(&[1.0], 0.5).unwrap(), ClassLabel::Positive);
        assert!(m.loss_trace.last().unwrap() < &m.loss_trace[0]);
    }

    #[test]
    fn divergent_rate_reports_non_finite_loss() {
        let d = Dataset::from_slices(&[&[0.0], &[1e200]], &[0, 1]).unwrap();
        let p = LogisticParams {
            learning_rate: 1e200,
            ..Default::default()
        };
        assert!(matches!(
            fit_logistic(&d, &p),
            Err(ModelError::NonFiniteLoss { .. })
        ));
    }

    fn one_d(mu0: f64, mu1: f64, var: f64, priors: [f64; 2]) -> LdaModel {
        LdaModel::from_parts([vec![mu0], vec![mu1]], vec![var], priors, 0.0).unwrap()
    }

    #[test]
    fn discriminant_hand_value() {
        let m = one_d(1.0, 1.0, 1.0, [0.5, 0.5]);
        let d = lda_discriminant(&m, &[2.0], ClassLabel::Positive).unwrap();
        assert!((d - (2.0 - 0.5 + 0.5f64.ln())).abs() < 1e-12);
        assert!((d - 0.8069).abs() < 1e-4);
    }

    #[test]
    fn prior_shift_is_ln2() {
        let a = one_d(-1.0, 1.0, 1.0, [0.25, 0.75]);
        let b = one_d(-1.0, 1.0, 1.0, [0.5, 0.5]);
        let x = [0.3];
        let da = lda_discriminant(&a, &x, ClassLabel::Negative).unwrap();
        let db = lda_discriminant(&b, &x, ClassLabel::Negative).unwrap();
        assert!((db - da - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_predictions() {
        let m = one_d(-1.0, 1.0, 1.0, [0.5, 0.5]);
        let d0 = lda_discriminant(&m, &[0.0], ClassLabel::Negative).unwrap();
        let d1 = lda_discriminant(&m, &[0.0], ClassLabel::Positive).unwrap();
        assert_eq!(d0, d1);
        assert_eq!(lda_predict(&m, &[0.0]).unwrap(), ClassLabel::Negative);
        assert_eq!(lda_predict(&m, &[2.0]).unwrap(), ClassLabel::Positive);
        assert_eq!(lda_predict(&m, &[-0.01]).unwrap(), ClassLabel::Negative);
        assert_eq!(lda_predict(&m, &[0.01]).unwrap(), ClassLabel::Positive);
    }

    #[test]
    fn fit_lda_simple_means() {
        let d = Dataset::from_slices(&[&[-1.0], &[-1.0], &[1.0], &[1.0]], &[0, 0, 1, 1]).unwrap();
        let m = fit_lda(&d, &LdaParams::default()).unwrap();
        assert_eq!(m.means, [vec![-1.0], vec![1.0]]);
        assert_eq!(m.priors, [0.5, 0.5]);
        assert!((m.covariance[0] - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn duplicated_feature_is_invertible_with_ridge() {
        let rows: Vec<Vec<f64>> = [0.1, 0.4, 0.35, 0.8, 0.9, 0.6]
            .iter()
            .map(|&v| vec![v, v])
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let d = Dataset::from_slices(&refs, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!(fit_lda(&d, &LdaParams::default()).is_ok());
        assert!(matches!(
            fit_lda(&d, &LdaParams { ridge: 0.0 }),
            Err(ModelError::SingularCovariance)
        ));
    }

    #[test]
    fn fit_lda_errors() {
        let single = Dataset::from_slices(&[&[0.0], &[1.0]], &[1, 1]).unwrap();
        assert_eq!(
            fit_lda(&single, &LdaParams::default()),
            Err(ModelError::SingleClass)
        );
        let thin = Dataset::from_slices(&[&[0.0], &[1.0], &[2.0]], &[0, 1, 1]).unwrap();
        assert!(matches!(
            fit_lda(&thin, &LdaParams::default()),
            Err(ModelError::TooFewRows { class: 0, .. })
        ));
    }
}
