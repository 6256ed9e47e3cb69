//! Class reports, ROC and precision-recall curves from raw scores.
//!
//!     cargo run --example metrics_curves

use chd_bench::bench::render_curve_csv;
use chd_bench::metrics::{build_report, pr_curve, roc_curve};
use chd_bench::ClassLabel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth: Vec<ClassLabel> = [1, 0, 1, 0, 0, 1, 0, 0, 0, 0]
        .iter()
        .map(|&v| ClassLabel::from_bool(v == 1))
        .collect();
    let scores = [0.92, 0.81, 0.66, 0.60, 0.60, 0.45, 0.30, 0.22, 0.10, 0.05];

    let report = build_report(&truth, &scores, 0.5)?;
    for row in &report.classes {
        println!(
            "{:<8} precision {:.2} recall {:.2} f1 {:.2} support {}",
            row.class.name(),
            row.precision.value,
            row.recall.value,
            row.f1.value,
            row.support
        );
    }
    println!(
        "accuracy {:.2}, macro f1 {:.2}, weighted f1 {:.2}",
        report.accuracy, report.macro_avg.f1, report.weighted_avg.f1
    );

    // nothing reaches 0.95, so CHD precision has a zero denominator
    let strict = build_report(&truth, &scores, 0.95)?;
    println!("at threshold 0.95 CHD precision undefined: {}", strict.row(ClassLabel::Positive).precision.degenerate);

    let roc = roc_curve(&truth, &scores)?;
    let pr = pr_curve(&truth, &scores)?;
    println!("ROC area {:.4}, PR area {:.4}", roc.area, pr.area);
    print!("{}", render_curve_csv(&roc, "fpr", "tpr"));
    Ok(())
}
