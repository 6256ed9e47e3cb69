//! Confusion counts, per-class precision/recall/F1 reports with macro and
//! weighted averages, and ROC / precision-recall curves.

mod curve;

pub use curve::{pr_curve, roc_curve, trapezoid_area, Curve};

use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

fn check_lengths(truth: usize, other: usize) -> Result<(), EvalError> {
    if truth != other {
        return Err(EvalError::LengthMismatch { truth, other });
    }
    if truth == 0 {
        return Err(EvalError::Empty);
    }
    Ok(())
}

/// Confusion counts treating `positive` as the positive class.
pub fn confusion(
    truth: &[ClassLabel],
    predicted: &[ClassLabel],
    positive: ClassLabel,
) -> Result<ConfusionCounts, EvalError> {
    check_lengths(truth.len(), predicted.len())?;
    let mut c = ConfusionCounts {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for (&t, &p) in truth.iter().zip(predicted) {
        match (t == positive, p == positive) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// A rate that is 0 and flagged when its denominator is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub degenerate: bool,
}

impl Rate {
    pub fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            Rate {
                value: 0.0,
                degenerate: true,
            }
        } else {
            Rate {
                value: num / den,
                degenerate: false,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: Rate,
    pub recall: Rate,
    pub f1: Rate,
}

/// `P = TP/(TP+FP)`, `R = TP/(TP+FN)`, `F1 = 2PR/(P+R)`.
pub fn prf(c: &ConfusionCounts) -> Prf {
    let precision = Rate::ratio(c.tp as f64, (c.tp + c.fp) as f64);
    let recall = Rate::ratio(c.tp as f64, (c.tp + c.fn_) as f64);
    let f1 = Rate::ratio(
        2.0 * precision.value * recall.value,
        precision.value + recall.value,
    );
    Prf {
        precision,
        recall,
        f1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: ClassLabel,
    pub precision: Rate,
    pub recall: Rate,
    pub f1: Rate,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageRow {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    /// Non-CHD then CHD.
    pub classes: [ClassRow; 2],
    pub accuracy: f64,
    pub macro_avg: AverageRow,
    pub weighted_avg: AverageRow,
    pub total: usize,
}

impl ClassReport {
    pub fn row(&self, class: ClassLabel) -> &ClassRow {
        &self.classes[class.index()]
    }
}

/// Report for thresholded scores: class 1 iff `score >= threshold`.
pub fn build_report(
    truth: &[ClassLabel],
    scores: &[f64],
    threshold: f64,
) -> Result<ClassReport, EvalError> {
    check_lengths(truth.len(), scores.len())?;
    if let Some(&s) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(EvalError::ScoreOutOfRange(s));
    }
    let predicted: Vec<ClassLabel> = scores
        .iter()
        .map(|&s| ClassLabel::from_bool(s >= threshold))
        .collect();
    report_from_predictions(truth, &predicted)
}

/// Report for hard class predictions.
pub fn report_from_predictions(
    truth: &[ClassLabel],
    predicted: &[ClassLabel],
) -> Result<ClassReport, EvalError> {
    check_lengths(truth.len(), predicted.len())?;
    let counts = ClassLabel::BOTH.map(|class| confusion(truth, predicted, class).expect("lengths checked"));
    let rows = ClassLabel::BOTH.map(|class| {
        let c = &counts[class.index()];
        let p = prf(c);
        ClassRow {
            class,
            precision: p.precision,
            recall: p.recall,
            f1: p.f1,
            support: c.tp + c.fn_,
        }
    });
    let total = truth.len();
    let correct = counts[0].tp + counts[1].tp;
    let mean = |f: fn(&ClassRow) -> f64| (f(&rows[0]) + f(&rows[1])) / 2.0;
    let weighted =
        |f: fn(&ClassRow) -> f64| rows.iter().map(|r| f(r) * r.support as f64).sum::<f64>() / total as f64;
    let precision = |r: &ClassRow| r.precision.value;
    let recall = |r: &ClassRow| r.recall.value;
    let f1 = |r: &ClassRow| r.f1.value;
    Ok(ClassReport {
        classes: rows,
        accuracy: correct as f64 / total as f64,
        macro_avg: AverageRow {
            precision: mean(precision),
            recall: mean(recall),
            f1: mean(f1),
        },
        weighted_avg: AverageRow {
            precision: weighted(precision),
            // support * recall is the class's TP count, so this is exactly accuracy
            recall: correct as f64 / total as f64,
            f1: weighted(f1),
        },
        total,
    })
}
