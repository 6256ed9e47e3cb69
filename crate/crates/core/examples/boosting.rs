//! Gradient-boosted trees with second-order split gain and leaf weights.
//!
//!     cargo run --release --example boosting

use chd_bench::pipeline::{apply_scaler, drop_missing, fit_scaler, split, Resample};
use chd_bench::synthetic::synthetic_table;
use chd_bench::tree::{boost_score, fit_boost, leaf_weight, xgb_split_gain, BoostParams};
use chd_bench::derive_stream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // split gain for G_L = 2, H_L = 3, G_R = -1, H_R = 2 with lambda = 1
    println!("gain {:.4}", xgb_split_gain(2.0, 3.0, -1.0, 2.0, 1.0, 0.0));
    println!("leaf weight for G = 2, H = 3: {:.4}", leaf_weight(2.0, 3.0, 1.0));

    let clean = drop_missing(&synthetic_table(4240, 7))?;
    let parts = split(&clean, 0.7, &mut derive_stream(9, "split"))?;
    let scaler = fit_scaler(&parts.train)?;
    let train = apply_scaler(&scaler, &Resample::Over.apply(&parts.train, &mut derive_stream(9, "over"))?)?;
    let test = apply_scaler(&scaler, &parts.test)?;

    for eta in [0.05, 0.3, 1.0] {
        let params = BoostParams { learning_rate: eta, ..BoostParams::default() };
        let model = fit_boost(&train, &params)?;
        let correct = test
            .rows()
            .zip(test.labels())
            .filter(|(x, y)| (boost_score(&model, x).unwrap() >= 0.5) == y.is_positive())
            .count();
        let trace = &model.loss_trace;
        println!(
            "eta {eta:<4} base score {:.3}, train log-loss {:.4} -> {:.4} -> {:.4}, test accuracy {:.3}",
            model.base_score,
            trace[0],
            trace[10],
            trace.last().unwrap(),
            correct as f64 / test.n_rows() as f64
        );
    }
    Ok(())
}
