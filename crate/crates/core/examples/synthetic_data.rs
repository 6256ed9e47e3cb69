//! Write a synthetic Framingham-shaped CSV for trying out the benchmark.
//!
//!     cargo run --example synthetic_data -- /tmp/synthetic.csv 4240 7

use chd_bench::synthetic::synthetic_framingham_csv;

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "synthetic_framingham.csv".into());
    let rows = args.next().map_or(4240, |s| s.parse().expect("rows must be an integer"));
    let seed = args.next().map_or(7, |s| s.parse().expect("seed must be an integer"));
    std::fs::write(&path, synthetic_framingham_csv(rows, seed))?;
    println!("wrote {rows} synthetic rows to {path}");
    Ok(())
}
