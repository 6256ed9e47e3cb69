use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dataset::ClassLabel;
use crate::error::BenchError;
use crate::metrics::{AverageRow, ClassReport, Curve, Rate};

use super::{BenchResult, CellOutcome};

/// Placeholder for metrics whose denominator was zero.
const UNDEFINED: &str = "—";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Markdown,
    Json,
    Csv,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [OutputFormat::Markdown, OutputFormat::Json, OutputFormat::Csv];

    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Markdown => "report.md",
            OutputFormat::Json => "report.json",
            OutputFormat::Csv => "report.csv",
        }
    }

    pub fn render(self, result: &BenchResult) -> Result<String, BenchError> {
        Ok(match self {
            OutputFormat::Markdown => render_markdown(result),
            OutputFormat::Json => render_json(result)?,
            OutputFormat::Csv => render_csv(result),
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format `{other}` (md|json|csv)")),
        }
    }
}

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf, BenchError> {
    fs::write(&path, contents).map_err(|source| BenchError::UnwritableOutput {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn create_dir(dir: &Path) -> Result<(), BenchError> {
    fs::create_dir_all(dir).map_err(|source| BenchError::UnwritableOutput {
        path: dir.to_path_buf(),
        source,
    })
}

/// Write one report file per format into `out_dir`, creating it if needed.
pub fn emit_report(
    result: &BenchResult,
    formats: &[OutputFormat],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, BenchError> {
    create_dir(out_dir)?;
    formats
        .iter()
        .map(|f| write_file(out_dir.join(f.file_name()), &f.render(result)?))
        .collect()
}

/// Write `curves/<model>_<resample>_{roc,pr}.csv` for every successful cell.
pub fn emit_curves(result: &BenchResult, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let dir = out_dir.join("curves");
    create_dir(&dir)?;
    let mut written = Vec::new();
    for cell in &result.cells {
        if let Some(m) = cell.metrics() {
            let stem = format!("{}_{}", cell.model, cell.resample);
            written.push(write_file(
                dir.join(format!("{stem}_roc.csv")),
                &render_curve_csv(&m.roc, "fpr", "tpr"),
            )?);
            written.push(write_file(
                dir.join(format!("{stem}_pr.csv")),
                &render_curve_csv(&m.pr, "recall", "precision"),
            )?);
        }
    }
    Ok(written)
}

/// Wall-clock timings go to their own file so the reports stay reproducible.
pub fn emit_timings(result: &BenchResult, out_dir: &Path) -> Result<PathBuf, BenchError> {
    create_dir(out_dir)?;
    let json = serde_json::to_string_pretty(&result.timings)?;
    write_file(out_dir.join("timings.json"), &json)
}

/// Reports, curves and timings in one call.
pub fn emit_all(
    result: &BenchResult,
    formats: &[OutputFormat],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, BenchError> {
    let mut written = emit_report(result, formats, out_dir)?;
    written.extend(emit_curves(result, out_dir)?);
    written.push(emit_timings(result, out_dir)?);
    Ok(written)
}

pub fn render_json(result: &BenchResult) -> Result<String, BenchError> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

/// `# area=<a>` then an `x,y` header and one point per line.
pub fn render_curve_csv(curve: &Curve, x: &str, y: &str) -> String {
    let mut out = format!("# area={}\n{x},{y}\n", curve.area);
    for (a, b) in &curve.points {
        writeln!(out, "{a},{b}").expect("writing to a String");
    }
    out
}

fn rate_md(r: Rate) -> String {
    if r.degenerate {
        UNDEFINED.to_string()
    } else {
        format!("{:.2}", r.value)
    }
}

fn rate_csv(r: Rate) -> String {
    if r.degenerate {
        String::new()
    } else {
        r.value.to_string()
    }
}

/// Five rows: one per class, accuracy, macro and weighted averages.
fn report_table(out: &mut String, report: &ClassReport) {
    out.push_str("| | Precision | Recall | F1-score |\n|---|---:|---:|---:|\n");
    for class in ClassLabel::BOTH {
        let row = report.row(class);
        writeln!(
            out,
            "| {} | {} | {} | {} |",
            class.name(),
            rate_md(row.precision),
            rate_md(row.recall),
            rate_md(row.f1)
        )
        .unwrap();
    }
    writeln!(out, "| Accuracy | | | {:.2} |", report.accuracy).unwrap();
    let avg = |out: &mut String, name: &str, a: &AverageRow| {
        writeln!(
            out,
            "| {name} | {:.2} | {:.2} | {:.2} |",
            a.precision, a.recall, a.f1
        )
        .unwrap();
    };
    avg(out, "Macro Average", &report.macro_avg);
    avg(out, "Weighted Average", &report.weighted_avg);
}

pub fn render_markdown(result: &BenchResult) -> String {
    let meta = &result.metadata;
    let mut out = String::from("# Ten-year CHD classifier comparison\n\n");
    writeln!(
        out,
        "Seed {} · train fraction {} · threshold {} · scaler fitted on {} · resampling {} the split\n",
        meta.seed,
        meta.split_ratio,
        meta.threshold,
        if meta.scale_on_full {
            "the full cleaned table"
        } else {
            "the training partition"
        },
        if meta.resample_before_split {
            "before"
        } else {
            "after"
        }
    )
    .unwrap();

    out.push_str("## Data\n\n");
    writeln!(
        out,
        "{} rows read, {} missing cells, {} complete rows ({} Non-CHD, {} CHD).\n",
        meta.raw_rows,
        meta.missing_total,
        meta.clean_rows,
        meta.clean_counts.non_chd,
        meta.clean_counts.chd
    )
    .unwrap();
    out.push_str("| Column | Missing |\n|---|---:|\n");
    for (col, n) in meta.missing_counts.iter().filter(|(_, &n)| n > 0) {
        writeln!(out, "| {col} | {n} |").unwrap();
    }
    out.push_str("\n| Resampling | Before (Non-CHD / CHD) | Train (Non-CHD / CHD) | Test (Non-CHD / CHD) |\n|---|---|---|---|\n");
    for p in &meta.partitions {
        writeln!(
            out,
            "| {} | {} / {} | {} / {} | {} / {} |",
            p.resample,
            p.before_resampling.non_chd,
            p.before_resampling.chd,
            p.train.non_chd,
            p.train.chd,
            p.test.non_chd,
            p.test.chd
        )
        .unwrap();
    }

    out.push_str("\n## Summary\n\n| Model | Resampling | Accuracy | ROC AUC | PR AUC |\n|---|---|---:|---:|---:|\n");
    for cell in &result.cells {
        match &cell.outcome {
            CellOutcome::Ok(m) => writeln!(
                out,
                "| {} | {} | {:.2} | {:.3} | {:.3} |",
                cell.model.title(),
                cell.resample,
                m.report.accuracy,
                m.roc.area,
                m.pr.area
            ),
            CellOutcome::Failed { .. } => writeln!(
                out,
                "| {} | {} | failed | | |",
                cell.model.title(),
                cell.resample
            ),
        }
        .unwrap();
    }

    for cell in &result.cells {
        writeln!(out, "\n## {} ({} sampling)\n", cell.model.title(), cell.resample).unwrap();
        match &cell.outcome {
            CellOutcome::Ok(m) => report_table(&mut out, &m.report),
            CellOutcome::Failed { error } => writeln!(out, "Failed: {error}").unwrap(),
        }
    }
    out
}

/// Long format: `model,resample,class,precision,recall,f1,support`. Undefined
/// rates are left empty; the accuracy row carries accuracy in the f1 column.
pub fn render_csv(result: &BenchResult) -> String {
    let mut out = String::from("model,resample,class,precision,recall,f1,support\n");
    for cell in &result.cells {
        let (model, resample) = (cell.model, cell.resample);
        let m = match &cell.outcome {
            CellOutcome::Ok(m) => m,
            CellOutcome::Failed { .. } => {
                writeln!(out, "{model},{resample},failed,,,,").unwrap();
                continue;
            }
        };
        let r = &m.report;
        for class in ClassLabel::BOTH {
            let row = r.row(class);
            writeln!(
                out,
                "{model},{resample},{},{},{},{},{}",
                class.name(),
                rate_csv(row.precision),
                rate_csv(row.recall),
                rate_csv(row.f1),
                row.support
            )
            .unwrap();
        }
        writeln!(out, "{model},{resample},accuracy,,,{},{}", r.accuracy, r.total).unwrap();
        for (name, a) in [("macro avg", &r.macro_avg), ("weighted avg", &r.weighted_avg)] {
            writeln!(
                out,
                "{model},{resample},{name},{},{},{},{}",
                a.precision, a.recall, a.f1, r.total
            )
            .unwrap();
        }
    }
    out
}
