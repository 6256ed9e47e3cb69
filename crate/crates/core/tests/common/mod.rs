//! Independent reference implementations shared by the oracle tests and the
//! acceptance runner. Each `check_*` returns the number of cases checked.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;

use chd_bench::knn::{fit_knn, knn_predict, KnnParams};
use chd_bench::linear::{log_loss, log_loss_gradient, sigmoid};
use chd_bench::metrics::roc_curve;
use chd_bench::svm::{svm_objective, svm_subgradient};
use chd_bench::tree::{best_split, fit_boost, gini, entropy, BoostParams, Impurity, RegressionNode};
use chd_bench::{derive_stream, ClassLabel, Dataset, RngStream};

/// Real dataset location: `CHD_DATA`, else `data/framingham.csv` in the crate.
pub fn dataset_path() -> Option<PathBuf> {
    let candidate = std::env::var_os("CHD_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/framingham.csv"));
    candidate.is_file().then_some(candidate)
}

/// Features drawn from `levels` integer values, so ties are common.
pub fn random_dataset(rng: &mut RngStream, rows: usize, features: usize, levels: u32) -> Dataset {
    let values: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..features).map(|_| rng.random_range(0..levels) as f64).collect())
        .collect();
    let labels: Vec<ClassLabel> = (0..rows).map(|_| ClassLabel::from_bool(rng.random_bool(0.5))).collect();
    let names = (0..features).map(|j| format!("x{j}")).collect();
    Dataset::from_rows(names, &values, labels).unwrap()
}

fn counts(data: &Dataset, rows: &[usize]) -> [usize; 2] {
    let mut c = [0; 2];
    for &i in rows {
        c[data.label(i).index()] += 1;
    }
    c
}

fn partition_gain(data: &Dataset, impurity: Impurity, feature: usize, threshold: f64) -> Option<f64> {
    let all: Vec<usize> = (0..data.n_rows()).collect();
    let (l, r): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| data.value(i, feature) < threshold);
    if l.is_empty() || r.is_empty() {
        return None;
    }
    let imp = |c| match impurity {
        Impurity::Gini => gini(c).unwrap(),
        Impurity::Entropy => entropy(c).unwrap(),
    };
    let n = all.len() as f64;
    Some(
        imp(counts(data, &all))
            - l.len() as f64 / n * imp(counts(data, &l))
            - r.len() as f64 / n * imp(counts(data, &r)),
    )
}

/// Every threshold strictly between two observed values of every feature.
fn exhaustive_thresholds(data: &Dataset) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for f in 0..data.n_features() {
        let mut v: Vec<f64> = data.column(f).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        out.extend(v.windows(2).map(|w| (f, (w[0] + w[1]) / 2.0)));
    }
    out
}

/// `best_split` against exhaustive search on fixtures of 2 to 12 rows.
pub fn check_best_split(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = derive_stream(seed, "oracle/best-split");
    for case in 0..cases {
        let rows = rng.random_range(2..=12);
        let features = rng.random_range(1..=3);
        let data = random_dataset(&mut rng, rows, features, 5);
        let impurity = if case % 2 == 0 { Impurity::Gini } else { Impurity::Entropy };
        let all: Vec<usize> = (0..rows).collect();
        let feats: Vec<usize> = (0..features).collect();
        let oracle = exhaustive_thresholds(&data)
            .into_iter()
            .filter_map(|(f, t)| partition_gain(&data, impurity, f, t))
            .fold(f64::NEG_INFINITY, f64::max);
        match best_split(&data, &all, impurity, &feats) {
            None if oracle <= 1e-12 => {}
            None => return Err(format!("case {case}: no split but oracle gain {oracle}")),
            Some(s) => {
                let realised = partition_gain(&data, impurity, s.feature, s.threshold)
                    .ok_or_else(|| format!("case {case}: split leaves an empty side"))?;
                if (s.gain - oracle).abs() > 1e-12 || (realised - oracle).abs() > 1e-12 {
                    return Err(format!(
                        "case {case}: gain {} (realised {realised}) vs oracle {oracle}",
                        s.gain
                    ));
                }
            }
        }
    }
    Ok(cases)
}

/// `knn_predict` against a full sort of (distance, index) on ≤50-row fixtures.
pub fn check_knn(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = derive_stream(seed, "oracle/knn");
    for case in 0..cases {
        let rows = rng.random_range(1..=50);
        let features = rng.random_range(1..=4);
        let data = random_dataset(&mut rng, rows, features, 4);
        let k = rng.random_range(1..=rows);
        let model = fit_knn(&data, &KnnParams { k }).unwrap();
        // half-integer offsets make some queries equidistant from several rows
        let query: Vec<f64> = (0..features)
            .map(|_| rng.random_range(0..4) as f64 - 0.5 * rng.random_range(0..2) as f64)
            .collect();
        let mut all: Vec<(f64, usize)> = data
            .rows()
            .enumerate()
            .map(|(i, r)| {
                let d2: f64 = r.iter().zip(&query).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2.sqrt(), i)
            })
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let votes = all[..k].iter().filter(|(_, i)| data.label(*i).is_positive()).count();
        let expected = (votes as f64 / k as f64, ClassLabel::from_bool(2 * votes > k));
        let got = knn_predict(&model, &query).unwrap();
        if got != expected {
            return Err(format!("case {case}: {got:?} vs oracle {expected:?}"));
        }
        let nn: Vec<usize> = all[..k].iter().map(|p| p.1).collect();
        if model.neighbours(&query).unwrap() != nn {
            return Err(format!("case {case}: neighbour order differs"));
        }
    }
    Ok(cases)
}

/// Tie-aware pairwise concordance (Mann-Whitney U / (P·N)).
pub fn concordance(truth: &[ClassLabel], scores: &[f64]) -> f64 {
    let (mut num, mut pairs) = (0.0, 0.0);
    for (i, ti) in truth.iter().enumerate() {
        for (j, tj) in truth.iter().enumerate() {
            if ti.is_positive() && !tj.is_positive() {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    num += 1.0;
                } else if scores[i] == scores[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / pairs
}

/// ROC area against pairwise concordance on ≤20-point fixtures.
pub fn check_roc(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = derive_stream(seed, "oracle/roc");
    let mut checked = 0;
    while checked < cases {
        let n = rng.random_range(2..=20);
        let truth: Vec<ClassLabel> = (0..n).map(|_| ClassLabel::from_bool(rng.random_bool(0.4))).collect();
        if truth.iter().all(|t| t.is_positive()) || truth.iter().all(|t| !t.is_positive()) {
            continue;
        }
        // coarse grid so ties occur
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64 / 5.0).collect();
        let area = roc_curve(&truth, &scores).unwrap().area;
        let oracle = concordance(&truth, &scores);
        if (area - oracle).abs() > 1e-12 {
            return Err(format!("case {checked}: area {area} vs concordance {oracle}"));
        }
        checked += 1;
    }
    Ok(cases)
}

fn xgb_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64, gamma: f64) -> f64 {
    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - (gl + gr).powi(2) / (hl + hr + lambda)) - gamma
}

/// One boosting round of depth 1 against the closed-form Newton stump:
/// gradients at the base score, exhaustive threshold search, leaf weights
/// `-G/(H+λ)`.
pub fn check_newton_stump(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = derive_stream(seed, "oracle/newton-stump");
    let mut checked = 0;
    while checked < cases {
        let rows = rng.random_range(2..=12);
        let features = rng.random_range(1..=3);
        let data = random_dataset(&mut rng, rows, features, 5);
        let [neg, pos] = data.class_counts();
        if neg == 0 || pos == 0 {
            continue;
        }
        let lambda = [0.0, 0.5, 1.0, 2.5][rng.random_range(0..4)];
        let gamma = [0.0, 0.0, 0.1][rng.random_range(0..3)];
        let eta = [1.0, 0.3][rng.random_range(0..2)];
        let params = BoostParams {
            rounds: 1,
            learning_rate: eta,
            lambda,
            gamma,
            max_depth: 1,
        };
        let model = fit_boost(&data, &params).unwrap();

        let p = pos as f64 / rows as f64;
        let g: Vec<f64> = data.labels().iter().map(|y| p - y.value()).collect();
        let h = p * (1.0 - p);
        let weight = |idx: &[usize]| {
            let gs: f64 = idx.iter().map(|&i| g[i]).sum();
            -gs / (h * idx.len() as f64 + lambda)
        };
        let all: Vec<usize> = (0..rows).collect();
        let mut best = f64::NEG_INFINITY;
        for (f, t) in exhaustive_thresholds(&data) {
            let (l, r): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| data.value(i, f) < t);
            let gl: f64 = l.iter().map(|&i| g[i]).sum();
            let gr: f64 = r.iter().map(|&i| g[i]).sum();
            best = best.max(xgb_gain(gl, h * l.len() as f64, gr, h * r.len() as f64, lambda, gamma));
        }

        let tree = &model.trees[0];
        let expected_raw_init = (p / (1.0 - p)).ln();
        if (model.raw_init - expected_raw_init).abs() > 1e-12 {
            return Err(format!("case {checked}: raw init {} vs {expected_raw_init}", model.raw_init));
        }
        match tree {
            RegressionNode::Leaf { weight: w } => {
                if best > 1e-12 {
                    return Err(format!("case {checked}: leaf but oracle gain {best}"));
                }
                let expected = if h * rows as f64 + lambda > 0.0 { weight(&all) } else { 0.0 };
                if (w - expected).abs() > 1e-12 {
                    return Err(format!("case {checked}: root weight {w} vs {expected}"));
                }
            }
            RegressionNode::Split { feature, threshold, .. } => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    all.iter().partition(|&&i| data.value(i, *feature) < *threshold);
                let gl: f64 = l.iter().map(|&i| g[i]).sum();
                let gr: f64 = r.iter().map(|&i| g[i]).sum();
                let realised = xgb_gain(gl, h * l.len() as f64, gr, h * r.len() as f64, lambda, gamma);
                if (realised - best).abs() > 1e-12 {
                    return Err(format!("case {checked}: stump gain {realised} vs oracle {best}"));
                }
                let expected = [weight(&l), weight(&r)];
                if (tree.leaf_weights()[0] - expected[0]).abs() > 1e-12
                    || (tree.leaf_weights()[1] - expected[1]).abs() > 1e-12
                {
                    return Err(format!("case {checked}: leaves {:?} vs {expected:?}", tree.leaf_weights()));
                }
            }
        }
        for (i, x) in data.rows().enumerate() {
            let expected = sigmoid(expected_raw_init + eta * tree.output(x));
            let got = chd_bench::tree::boost_score(&model, x).unwrap();
            if (got - expected).abs() > 1e-12 {
                return Err(format!("case {checked}: row {i} score {got} vs {expected}"));
            }
        }
        checked += 1;
    }
    Ok(cases)
}

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / (norm(a) + norm(b)).max(1e-12)
}

fn continuous_dataset(rng: &mut RngStream, rows: usize, features: usize) -> Dataset {
    let values: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..features).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let labels = (0..rows).map(|_| ClassLabel::from_bool(rng.random_bool(0.5))).collect();
    Dataset::from_rows((0..features).map(|j| format!("x{j}")).collect(), &values, labels).unwrap()
}

/// Central finite differences of `f` at `(w, b)`, flattened with the bias last.
fn numeric_gradient(w: &[f64], b: f64, step: f64, f: impl Fn(&[f64], f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(w.len() + 1);
    for j in 0..w.len() {
        let (mut up, mut down) = (w.to_vec(), w.to_vec());
        up[j] += step;
        down[j] -= step;
        out.push((f(&up, b) - f(&down, b)) / (2.0 * step));
    }
    out.push((f(w, b + step) - f(w, b - step)) / (2.0 * step));
    out
}

/// Worst relative error of the analytic log-loss gradient over `instances`.
pub fn check_logistic_gradient(instances: usize, seed: u64) -> f64 {
    let mut rng = derive_stream(seed, "gradcheck/logistic");
    (0..instances)
        .map(|_| {
            let (rows, features) = (rng.random_range(3..=12), rng.random_range(1..=5));
            let data = continuous_dataset(&mut rng, rows, features);
            let w: Vec<f64> = (0..features).map(|_| rng.random_range(-1.5..1.5)).collect();
            let b = rng.random_range(-1.0..1.0);
            let (gw, gb) = log_loss_gradient(&w, b, &data);
            let mut analytic = gw;
            analytic.push(gb);
            let numeric = numeric_gradient(&w, b, 1e-6, |w, b| log_loss(w, b, &data));
            relative_error(&analytic, &numeric)
        })
        .fold(0.0, f64::max)
}

/// Worst relative error of the regularised hinge subgradient over
/// `instances`, each drawn away from the hinge kinks.
pub fn check_svm_gradient(instances: usize, seed: u64) -> f64 {
    let mut rng = derive_stream(seed, "gradcheck/svm");
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < instances {
        let (rows, features) = (rng.random_range(3..=12), rng.random_range(1..=5));
        let data = continuous_dataset(&mut rng, rows, features);
        let w: Vec<f64> = (0..features).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b = rng.random_range(-1.0..1.0);
        let c = [0.1, 1.0, 10.0][rng.random_range(0..3)];
        let near_kink = data.rows().zip(data.labels()).any(|(x, y)| {
            let s = if y.is_positive() { 1.0 } else { -1.0 };
            let margin: f64 = s * (x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + b);
            (margin - 1.0).abs() < 1e-3
        });
        if near_kink {
            continue;
        }
        let (gw, gb) = svm_subgradient(&w, b, &data, c);
        let mut analytic = gw;
        analytic.push(gb);
        let numeric = numeric_gradient(&w, b, 1e-6, |w, b| svm_objective(w, b, &data, c));
        worst = worst.max(relative_error(&analytic, &numeric));
        done += 1;
    }
    worst
}
