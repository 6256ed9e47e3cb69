//! CART decision trees and a bagged random forest.
//!
//!     cargo run --release --example trees

use chd_bench::pipeline::{apply_scaler, drop_missing, fit_scaler, split, Resample};
use chd_bench::synthetic::synthetic_table;
use chd_bench::tree::{
    best_split, fit_forest, fit_tree, forest_predict, ForestParams, Impurity, TreeNode, TreeParams,
};
use chd_bench::{derive_stream, Classifier, Dataset};

fn accuracy(model: &dyn Classifier, test: &Dataset) -> f64 {
    let correct = test
        .rows()
        .zip(test.labels())
        .filter(|(x, y)| model.predict(x, 0.5).unwrap() == **y)
        .count();
    correct as f64 / test.n_rows() as f64
}

fn print_top(node: &TreeNode, names: &[String], depth: usize) {
    let pad = "  ".repeat(depth + 1);
    match node {
        TreeNode::Leaf { counts, probability } => {
            println!("{pad}leaf {counts:?} p(CHD) = {probability:.2}")
        }
        TreeNode::Split { feature, threshold, left, right } if depth < 2 => {
            println!("{pad}{} < {threshold:.3}?", names[*feature]);
            print_top(left, names, depth + 1);
            print_top(right, names, depth + 1);
        }
        TreeNode::Split { .. } => println!("{pad}..."),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clean = drop_missing(&synthetic_table(4240, 7))?;
    let parts = split(&clean, 0.7, &mut derive_stream(5, "split"))?;
    let scaler = fit_scaler(&parts.train)?;
    let train = apply_scaler(&scaler, &Resample::Over.apply(&parts.train, &mut derive_stream(5, "over"))?)?;
    let test = apply_scaler(&scaler, &parts.test)?;

    let rows: Vec<usize> = (0..train.n_rows()).collect();
    let features: Vec<usize> = (0..train.n_features()).collect();
    for impurity in [Impurity::Gini, Impurity::Entropy] {
        let s = best_split(&train, &rows, impurity, &features).unwrap();
        println!(
            "root split by {impurity:?}: {} < {:.3}, gain {:.4}",
            train.feature_names()[s.feature],
            s.threshold,
            s.gain
        );
    }

    let full = fit_tree(&train, &TreeParams::default())?;
    println!(
        "unpruned tree: depth {}, {} leaves, test accuracy {:.3}",
        full.root.depth(),
        full.root.n_leaves(),
        accuracy(&full, &test)
    );
    let shallow = fit_tree(&train, &TreeParams { max_depth: Some(4), ..TreeParams::default() })?;
    println!("depth-4 tree, test accuracy {:.3}", accuracy(&shallow, &test));
    print_top(&shallow.root, train.feature_names(), 0);

    let forest = fit_forest(&train, &ForestParams::default(), &derive_stream(5, "forest"))?;
    println!(
        "forest of {} trees over {} of {} features per split, test accuracy {:.3}",
        forest.trees.len(),
        forest.feature_subset_size,
        forest.n_features,
        accuracy(&forest, &test)
    );
    let (share, class) = forest_predict(&forest, test.row(0))?;
    println!("first test row: {:.0}% of trees vote CHD, majority {class}", share * 100.0);
    Ok(())
}
