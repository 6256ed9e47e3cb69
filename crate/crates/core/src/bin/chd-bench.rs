use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chd_bench::bench::{emit_all, run_benchmark, BenchConfig, OutputFormat, DEFAULT_SEED};
use chd_bench::{ModelKind, ModelParams, Resample};

#[derive(Parser)]
#[command(name = "chd-bench", version, about = "Compare CHD risk classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full comparison and write reports.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Framingham-style CSV file.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, env = "CHD_BENCH_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Training fraction.
    #[arg(long, default_value_t = 0.7)]
    split: f64,
    /// Resampling modes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "under,over")]
    resample: Vec<Resample>,
    /// Models, comma separated; defaults to all eight.
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelKind>,
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "md,json,csv")]
    format: Vec<OutputFormat>,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long)]
    scale_on_full: bool,
    #[arg(long)]
    resample_before_split: bool,
    /// Hyperparameter override such as `rforest.n_trees=200`; repeatable.
    #[arg(long = "set", value_name = "MODEL.FIELD=VALUE")]
    overrides: Vec<String>,
}

fn config_from(args: &RunArgs) -> Result<BenchConfig, String> {
    let mut params = ModelParams::default();
    for o in &args.overrides {
        params.set(o)?;
    }
    let mut config = BenchConfig::new(&args.data);
    config.seed = args.seed;
    config.split_ratio = args.split;
    config.resamples = args.resample.clone();
    if !args.models.is_empty() {
        config.models = args.models.clone();
    }
    config.threshold = args.threshold;
    config.scale_on_full = args.scale_on_full;
    config.resample_before_split = args.resample_before_split;
    config.params = params;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let Command::Run(args) = cli.command;

    let config = match config_from(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match run_benchmark(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit_all(&result, &args.format, &args.out) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }

    for cell in &result.cells {
        match cell.metrics() {
            Some(m) => println!(
                "{:<8} {:<6} accuracy {:.3}  roc-auc {:.3}  pr-auc {:.3}",
                cell.model, cell.resample, m.report.accuracy, m.roc.area, m.pr.area
            ),
            None => println!("{:<8} {:<6} FAILED", cell.model, cell.resample),
        }
    }
    let failed = result.failures().count();
    println!("reports written to {}", args.out.display());
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", result.cells.len());
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
