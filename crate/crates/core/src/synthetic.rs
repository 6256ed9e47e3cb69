//! Synthetic Framingham-shaped records for demos and tests.
//!
//! The generator reproduces the column layout, value ranges, missing-cell
//! pattern and roughly 15% positive rate of the real cohort. It is not
//! clinical data and results on it say nothing about real patients.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::pipeline::{parse_csv, RawTable, FRAMINGHAM_COLUMNS};
use crate::rng::derive_stream;

/// Per-column probability of a missing cell.
const MISSING_RATE: [f64; 16] = [
    0.0, 0.0, 0.025, 0.0, 0.007, 0.0125, 0.0, 0.0, 0.0, 0.012, 0.0, 0.0, 0.0045, 0.0003, 0.09,
    0.0,
];

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    Normal::new(mean, sd).expect("finite parameters")
}

/// One synthetic row in canonical column order, label last.
fn draw_row(rng: &mut impl Rng) -> [f64; 16] {
    let male = f64::from(u8::from(rng.random_bool(0.43)));
    let age = rng.random_range(32..=70) as f64;
    let education = rng.random_range(1..=4) as f64;
    let smoker = rng.random_bool(0.49);
    let cigs = if smoker {
        (normal(18.0, 10.0).sample(rng).round()).clamp(1.0, 70.0)
    } else {
        0.0
    };
    let bp_meds = f64::from(u8::from(rng.random_bool(0.03)));
    let stroke = f64::from(u8::from(rng.random_bool(0.006)));
    let hyp = rng.random_bool(0.31);
    let diabetes = rng.random_bool(0.026);
    let tot_chol = normal(237.0, 44.0).sample(rng).clamp(107.0, 600.0).round();
    let sys_bp = (normal(125.0, 18.0).sample(rng) + if hyp { 22.0 } else { 0.0 })
        .clamp(83.0, 295.0);
    let dia_bp = (0.45 * sys_bp + normal(24.0, 8.0).sample(rng)).clamp(48.0, 142.0);
    let bmi = normal(25.8, 4.1).sample(rng).clamp(15.5, 56.8);
    let heart_rate = normal(76.0, 12.0).sample(rng).clamp(44.0, 143.0).round();
    let glucose = (normal(80.0, 12.0).sample(rng) + if diabetes { 90.0 } else { 0.0 })
        .clamp(40.0, 394.0)
        .round();

    let logit = -6.0 + 0.065 * age + 0.5 * male + 0.018 * cigs + 0.016 * (sys_bp - 120.0)
        + 0.006 * (glucose - 80.0)
        + 0.4 * f64::from(u8::from(hyp))
        + 0.9 * stroke;
    let p = 1.0 / (1.0 + (-logit).exp());
    let chd = f64::from(u8::from(rng.random_bool(p)));

    [
        male,
        age,
        education,
        f64::from(u8::from(smoker)),
        cigs,
        bp_meds,
        stroke,
        f64::from(u8::from(hyp)),
        f64::from(u8::from(diabetes)),
        tot_chol,
        sys_bp,
        dia_bp,
        bmi,
        heart_rate,
        glucose,
        chd,
    ]
}

/// `rows` synthetic records as CSV text with the Framingham header. Missing
/// cells are written as `NA`.
pub fn synthetic_framingham_csv(rows: usize, seed: u64) -> String {
    let mut rng = derive_stream(seed, "synthetic");
    let mut out = FRAMINGHAM_COLUMNS.join(",");
    out.push('\n');
    for _ in 0..rows {
        let row = draw_row(&mut rng);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            if rng.random_bool(MISSING_RATE[j]) {
                out.push_str("NA");
            } else {
                write!(out, "{v}").expect("writing to a String");
            }
        }
        out.push('\n');
    }
    out
}

/// [`synthetic_framingham_csv`] already parsed.
pub fn synthetic_table(rows: usize, seed: u64) -> RawTable {
    parse_csv(synthetic_framingham_csv(rows, seed).as_bytes()).expect("generator writes valid CSV")
}
