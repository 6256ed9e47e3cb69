//! Load, clean, split, scale and rebalance the cohort.
//!
//!     cargo run --example pipeline -- path/to/framingham.csv
//!
//! Without a path a synthetic table of the same shape is used.

use chd_bench::pipeline::{
    apply_scaler, drop_missing, fit_scaler, load_csv, missing_counts, split, Resample,
};
use chd_bench::synthetic::synthetic_table;
use chd_bench::derive_stream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = match std::env::args().nth(1) {
        Some(path) => load_csv(path)?,
        None => synthetic_table(4240, 7),
    };
    println!("{} rows, {} missing cells", table.n_rows(), table.missing_total());
    for (column, n) in missing_counts(&table).into_iter().filter(|(_, n)| *n > 0) {
        println!("  {column:<12} {n}");
    }

    let clean = drop_missing(&table)?;
    let [neg, pos] = clean.class_counts();
    println!("{} complete rows: {neg} Non-CHD, {pos} CHD", clean.n_rows());

    let parts = split(&clean, 0.7, &mut derive_stream(42, "split"))?;
    println!("train {} / test {}", parts.train.n_rows(), parts.test.n_rows());

    // min and max come from the training rows only
    let scaler = fit_scaler(&parts.train)?;
    let test = apply_scaler(&scaler, &parts.test)?;
    let age = test.feature_names().iter().position(|n| n == "age").unwrap();
    println!(
        "age range {}..{} scales to {:.3}..{:.3} on the test rows",
        scaler.min[age],
        scaler.max[age],
        test.column(age).fold(f64::INFINITY, f64::min),
        test.column(age).fold(f64::NEG_INFINITY, f64::max)
    );

    for mode in [Resample::Under, Resample::Over] {
        let balanced = mode.apply(&parts.train, &mut derive_stream(42, &format!("resample/{mode}")))?;
        let [neg, pos] = balanced.class_counts();
        println!("{mode}sampled training set: {neg} Non-CHD, {pos} CHD");
    }
    Ok(())
}
