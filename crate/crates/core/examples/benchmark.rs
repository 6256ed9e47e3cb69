//! The full comparison through the library API: every model under under-
//! and oversampling, then Markdown, JSON and CSV reports plus curve files.
//!
//!     cargo run --release --example benchmark -- [path/to/framingham.csv] [out-dir]
//!
//! The `chd-bench` binary offers the same run from the command line.

use std::path::PathBuf;

use chd_bench::bench::{emit_all, run_benchmark, run_on_table, BenchConfig, OutputFormat};
use chd_bench::synthetic::synthetic_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let data = args.next().filter(|s| !s.is_empty());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "bench-out".into()));

    let mut config = BenchConfig::new(data.clone().unwrap_or_default());
    config.params.set("rforest.n_trees=100")?;
    let result = match data {
        Some(_) => run_benchmark(&config)?,
        None => {
            println!("no data file given; using synthetic records");
            run_on_table(&synthetic_table(4240, 7), &config)?
        }
    };

    println!("{:<10} {:<6} {:>8} {:>8} {:>8}", "model", "mode", "acc", "roc", "pr");
    for cell in &result.cells {
        if let Some(m) = cell.metrics() {
            println!(
                "{:<10} {:<6} {:>8.3} {:>8.3} {:>8.3}",
                cell.model, cell.resample, m.report.accuracy, m.roc.area, m.pr.area
            );
        }
    }
    let written = emit_all(&result, &OutputFormat::ALL, &out)?;
    println!("{} files written under {}", written.len(), out.display());
    Ok(())
}
