use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::EvalError;

/// Piecewise-linear curve with its trapezoidal area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<(f64, f64)>,
    pub area: f64,
}

pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * 0.5)
        .sum()
}

/// Cumulative `(tp, fp)` after each group of tied scores, highest score first.
fn cumulative_counts(truth: &[ClassLabel], scores: &[f64]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut out = Vec::new();
    let (mut tp, mut fp) = (0, 0);
    for (k, &i) in order.iter().enumerate() {
        if truth[i].is_positive() {
            tp += 1;
        } else {
            fp += 1;
        }
        let group_ends = order.get(k + 1).is_none_or(|&j| scores[j] != scores[i]);
        if group_ends {
            out.push((tp, fp));
        }
    }
    out
}

fn check(truth: &[ClassLabel], scores: &[f64]) -> Result<(), EvalError> {
    if truth.len() != scores.len() {
        return Err(EvalError::LengthMismatch {
            truth: truth.len(),
            other: scores.len(),
        });
    }
    if truth.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(())
}

/// ROC: `(FPR, TPR)` after each distinct threshold, from (0,0) to (1,1).
pub fn roc_curve(truth: &[ClassLabel], scores: &[f64]) -> Result<Curve, EvalError> {
    check(truth, scores)?;
    let pos = truth.iter().filter(|l| l.is_positive()).count();
    let neg = truth.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::SingleClassTruth);
    }
    let mut points = vec![(0.0, 0.0)];
    points.extend(
        cumulative_counts(truth, scores)
            .into_iter()
            .map(|(tp, fp)| (fp as f64 / neg as f64, tp as f64 / pos as f64)),
    );
    let area = trapezoid_area(&points);
    Ok(Curve { points, area })
}

/// Precision-recall: `(recall, precision)` after each distinct threshold,
/// preceded by `(0, p₁)` where `p₁` is the precision of the first threshold.
pub fn pr_curve(truth: &[ClassLabel], scores: &[f64]) -> Result<Curve, EvalError> {
    check(truth, scores)?;
    let pos = truth.iter().filter(|l| l.is_positive()).count();
    if pos == 0 {
        return Err(EvalError::NoPositives);
    }
    let steps: Vec<(f64, f64)> = cumulative_counts(truth, scores)
        .into_iter()
        .map(|(tp, fp)| (tp as f64 / pos as f64, tp as f64 / (tp + fp) as f64))
        .collect();
    let mut points = Vec::with_capacity(steps.len() + 1);
    points.push((0.0, steps[0].1));
    points.extend(steps);
    let area = trapezoid_area(&points);
    Ok(Curve { points, area })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[u8]) -> Vec<ClassLabel> {
        v.iter().map(|&l| ClassLabel::from_bool(l == 1)).collect()
    }

    #[test]
    fn roc_perfect_and_flat() {
        let t = labels(&[0, 1, 0, 1, 1]);
        let r = roc_curve(&t, &[0.1, 0.9, 0.2, 0.8, 0.7]).unwrap();
        assert_eq!(r.area, 1.0);
        assert_eq!(r.points.first(), Some(&(0.0, 0.0)));
        assert_eq!(r.points.last(), Some(&(1.0, 1.0)));
        let flat = roc_curve(&t, &[0.4; 5]).unwrap();
        assert_eq!(flat.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(flat.area, 0.5);
    }

    #[test]
    fn four_point_fixture() {
        let t = labels(&[1, 0, 1, 0]);
        let s = [0.9, 0.8, 0.3, 0.1];
        // concordant pairs: (.9,.8) (.9,.1) (.3,.1); discordant: (.3,.8)
        assert_eq!(roc_curve(&t, &s).unwrap().area, 0.75);
        let pr = pr_curve(&t, &s).unwrap();
        let expected = 0.5 * 1.0 + 0.5 * (0.5 + 2.0 / 3.0) / 2.0;
        assert!((pr.area - expected).abs() < 1e-15);
    }

    #[test]
    fn pr_perfect_and_flat() {
        let t = labels(&[0, 1, 0, 1, 0]);
        assert_eq!(pr_curve(&t, &[0.1, 0.9, 0.2, 0.8, 0.3]).unwrap().area, 1.0);
        let flat = pr_curve(&t, &[0.5; 5]).unwrap();
        assert!((flat.area - 0.4).abs() < 1e-15);
        assert!(flat.points.iter().all(|p| (p.1 - 0.4).abs() < 1e-15));
    }

    #[test]
    fn errors() {
        assert_eq!(
            roc_curve(&labels(&[1, 1]), &[0.2, 0.3]),
            Err(EvalError::SingleClassTruth)
        );
        assert_eq!(
            pr_curve(&labels(&[0, 0]), &[0.2, 0.3]),
            Err(EvalError::NoPositives)
        );
        assert!(matches!(
            roc_curve(&labels(&[0, 1]), &[0.2]),
            Err(EvalError::LengthMismatch { .. })
        ));
    }
}
