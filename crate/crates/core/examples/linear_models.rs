//! Logistic regression by gradient descent and linear discriminant analysis.
//!
//!     cargo run --release --example linear_models

use chd_bench::linear::{fit_lda, fit_logistic, lda_discriminant, LdaParams, LogisticParams};
use chd_bench::pipeline::{apply_scaler, drop_missing, fit_scaler, split, Resample};
use chd_bench::synthetic::synthetic_table;
use chd_bench::{derive_stream, ClassLabel, Classifier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clean = drop_missing(&synthetic_table(4240, 7))?;
    let parts = split(&clean, 0.7, &mut derive_stream(1, "split"))?;
    let scaler = fit_scaler(&parts.train)?;
    let train = apply_scaler(&scaler, &Resample::Over.apply(&parts.train, &mut derive_stream(1, "over"))?)?;
    let test = apply_scaler(&scaler, &parts.test)?;

    let logit = fit_logistic(&train, &LogisticParams::default())?;
    println!(
        "logistic regression: {} steps, log-loss {:.4} -> {:.4}",
        logit.loss_trace.len() - 1,
        logit.loss_trace[0],
        logit.loss_trace.last().unwrap()
    );
    let names = train.feature_names();
    let mut ranked: Vec<(usize, f64)> = logit.weights.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for (j, w) in ranked.iter().take(4) {
        println!("  {:<14} {w:+.3}", names[*j]);
    }

    let lda = fit_lda(&train, &LdaParams::default())?;
    let x = test.row(0);
    println!(
        "LDA on the first test row: delta0 {:.3}, delta1 {:.3}, score {:.3} (truth {})",
        lda_discriminant(&lda, x, ClassLabel::Negative)?,
        lda_discriminant(&lda, x, ClassLabel::Positive)?,
        lda.score(x)?,
        test.label(0)
    );

    for (name, model) in [("logistic", &logit as &dyn Classifier), ("lda", &lda)] {
        let correct = test
            .rows()
            .zip(test.labels())
            .filter(|(x, y)| model.predict(x, 0.5).unwrap() == **y)
            .count();
        println!("{name:<9} test accuracy {:.3}", correct as f64 / test.n_rows() as f64);
    }
    Ok(())
}
