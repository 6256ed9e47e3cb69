//! Soft-margin linear SVM trained by stochastic subgradient descent.
//!
//!     cargo run --release --example svm

use chd_bench::svm::{fit_svm, svm_decision, svm_predict, SvmParams};
use chd_bench::{derive_stream, Dataset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // two separable clouds
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|i| {
            let t = i as f64 * 0.37;
            let shift = if i % 2 == 0 { -1.5 } else { 1.5 };
            vec![shift + t.sin() * 0.6, shift + t.cos() * 0.6]
        })
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let labels: Vec<u8> = (0..40).map(|i| (i % 2) as u8).collect();
    let data = Dataset::from_slices(&refs, &labels)?;

    for c in [0.01, 0.1, 1.0] {
        let params = SvmParams { c, epochs: 50 };
        let model = fit_svm(&data, &params, &mut derive_stream(3, "svm"))?;
        let min_margin = data
            .rows()
            .zip(data.labels())
            .map(|(x, y)| {
                let s = if y.is_positive() { 1.0 } else { -1.0 };
                s * svm_decision(&model, x).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        let correct = data
            .rows()
            .zip(data.labels())
            .filter(|(x, y)| svm_predict(&model, x).unwrap() == **y)
            .count();
        println!(
            "C = {c:>6}: w = [{:.3}, {:.3}], b = {:+.3}, smallest margin {min_margin:+.3}, {correct}/40 correct, objective {:.3} -> {:.3}",
            model.weights[0],
            model.weights[1],
            model.bias,
            model.objective_trace[0],
            model.objective_trace.last().unwrap()
        );
    }
    Ok(())
}
