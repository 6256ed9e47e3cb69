//! Gaussian naive Bayes and K-nearest neighbours.
//!
//!     cargo run --release --example bayes_knn

use chd_bench::bayes::{fit_gnb, gnb_posterior, GnbParams};
use chd_bench::knn::{fit_knn, knn_predict, KnnParams};
use chd_bench::pipeline::{apply_scaler, drop_missing, fit_scaler, split, Resample};
use chd_bench::synthetic::synthetic_table;
use chd_bench::{derive_stream, Classifier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clean = drop_missing(&synthetic_table(4240, 7))?;
    let parts = split(&clean, 0.7, &mut derive_stream(2, "split"))?;
    let scaler = fit_scaler(&parts.train)?;
    let test = apply_scaler(&scaler, &parts.test)?;

    for mode in [Resample::Under, Resample::Over] {
        let train = apply_scaler(&scaler, &mode.apply(&parts.train, &mut derive_stream(2, mode.name()))?)?;
        let gnb = fit_gnb(&train, &GnbParams::default())?;
        let (p0, p1) = gnb_posterior(&gnb, test.row(0))?;
        println!("{mode}: naive Bayes posterior for the first test row ({p0:.3}, {p1:.3})");
        for k in [1, 5, 15] {
            let knn = fit_knn(&train, &KnnParams { k })?;
            let (share, class) = knn_predict(&knn, test.row(0))?;
            let correct = test
                .rows()
                .zip(test.labels())
                .filter(|(x, y)| knn.predict(x, 0.5).unwrap() == **y)
                .count();
            println!(
                "  K = {k:>2}: first row {share:.2} CHD neighbours -> {class}; test accuracy {:.3}",
                correct as f64 / test.n_rows() as f64
            );
        }
        let correct = test
            .rows()
            .zip(test.labels())
            .filter(|(x, y)| gnb.predict(x, 0.5).unwrap() == **y)
            .count();
        println!("  naive Bayes test accuracy {:.3}", correct as f64 / test.n_rows() as f64);
    }
    Ok(())
}
