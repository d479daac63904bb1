use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cga2m::{
    bench_prepared, compute_effects, export_plots, median_table, read_features, read_monotone_spec,
    rmse, train, Dataset64, Model, PreparedRun, RunSpec, SplitFractions, TrainOverrides,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cga2m",
    version,
    about = "Constrained GA2M regression with a higher-order term"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a model and write it as JSON
    Train(TrainArgs),
    /// Score a CSV with a trained model
    Predict(PredictArgs),
    /// Write per-term effects and importances as CSV
    Importance(EvalArgs),
    /// Write shape-function plot data (one CSV per term) and importance.csv
    Plot(EvalArgs),
    /// Train the four ablation variants plus OLS and print an RMSE table
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Input CSV with a header row
    #[arg(long)]
    input: PathBuf,
    /// Target column name
    #[arg(long)]
    target: String,
    /// Seed for the train/validation/test permutation
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train, validation and test fractions
    #[arg(long, default_value = "0.6,0.2,0.2", value_parser = parse_split)]
    split: SplitFractions,
}

#[derive(Args, Debug, Clone)]
struct TrainingArgs {
    /// Monotone spec file: one `<column> <inc|dec>` per line
    #[arg(long)]
    config: Option<PathBuf>,
    /// Boosting rounds per term
    #[arg(long)]
    rounds: Option<usize>,
    /// Shrinkage per boosting round
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Leaf budget per tree, for every stage
    #[arg(long)]
    max_leaves: Option<usize>,
    /// Pair selection attempts
    #[arg(long)]
    max_pairs: Option<usize>,
    /// Importance below which terms are pruned
    #[arg(long, default_value_t = 0.01)]
    threshold: f64,
    /// Skip the higher-order term
    #[arg(long)]
    no_higher: bool,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    training: TrainingArgs,
    /// Where to write the model
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    input: PathBuf,
    /// Target column; if present in the input, RMSE is printed
    #[arg(long)]
    target: Option<String>,
    /// Predictions CSV (`row,prediction`)
    #[arg(long, default_value = "predictions.csv")]
    out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Train,
    Valid,
    Test,
    All,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Which split to evaluate on
    #[arg(long, value_enum, default_value_t = Part::Train)]
    on: Part,
    /// Output file (importance) or directory (plot)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    training: TrainingArgs,
    /// Number of consecutive seeds starting at --seed; the median is reported
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Results CSV
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
}

fn parse_split(text: &str) -> Result<SplitFractions, String> {
    SplitFractions::parse(text).map_err(|e| e.to_string())
}

fn run_spec(data: &DataArgs, training: Option<&TrainingArgs>) -> Result<RunSpec> {
    let mut spec = RunSpec::new(&data.input, &data.target);
    spec.seed = data.seed;
    spec.split = data.split;
    if let Some(t) = training {
        if let Some(path) = &t.config {
            spec.monotone_spec = read_monotone_spec(path)
                .with_context(|| format!("reading monotone spec {}", path.display()))?;
        }
        spec.overrides = TrainOverrides {
            rounds: t.rounds,
            learning_rate: t.learning_rate,
            max_leaves: t.max_leaves,
            max_pairs: t.max_pairs,
            threshold: Some(t.threshold),
            no_higher: t.no_higher,
        };
    }
    Ok(spec)
}

fn prepare(spec: &RunSpec) -> Result<PreparedRun<f64>> {
    let run = spec
        .prepare::<f64>()
        .with_context(|| format!("loading {}", spec.input_path.display()))?;
    if !run.dropped_columns.is_empty() {
        eprintln!(
            "dropped non-numeric columns: {}",
            run.dropped_columns.join(", ")
        );
    }
    if run.dropped_rows > 0 {
        eprintln!(
            "dropped {} rows with missing or unparseable cells",
            run.dropped_rows
        );
    }
    Ok(run)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Model::from_text(&text).with_context(|| format!("parsing model {}", path.display()))
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let run = prepare(&run_spec(&args.data, Some(&args.training))?)?;
    let (model, report) = train(&run.train, Some(&run.valid), &run.config)?;
    write_file(&args.out, &model.to_text())?;

    let names = model.feature_names();
    for stage in &report.stages {
        let valid = stage
            .rmse_valid
            .map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        println!(
            "stage {:<12} train {:.2}  valid {}",
            stage.stage, stage.rmse_train, valid
        );
    }
    for d in &report.deleted_pairs {
        println!(
            "deleted pair {}: {}",
            cga2m::TermId::Pairwise(d.pair.0, d.pair.1).label(names),
            d.reason()
        );
    }
    for p in &report.pruned_terms {
        println!(
            "pruned {} (importance {:.4})",
            p.term.label(names),
            p.importance
        );
    }
    for (label, data) in [
        ("train", &run.train),
        ("valid", &run.valid),
        ("test", &run.test),
    ] {
        println!(
            "rmse {label} {:.2}",
            rmse(&model.predict_batch(data)?, data.target())?
        );
    }
    println!("wrote {} ({} terms)", args.out.display(), model.n_terms());
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let file =
        fs::File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let load = read_features::<f64>(file, model.feature_names(), args.target.as_deref())?;
    if load.dropped_rows > 0 {
        eprintln!(
            "dropped {} rows with missing or unparseable cells",
            load.dropped_rows
        );
    }
    let predictions = model.predict_batch(&load.data)?;
    let mut out = String::from("row,prediction\n");
    for (n, p) in load.row_numbers.iter().zip(&predictions) {
        out.push_str(&format!("{n},{p}\n"));
    }
    write_file(&args.out, &out)?;
    if load.has_target {
        println!("rmse {:.2}", rmse(&predictions, load.data.target())?);
    }
    println!(
        "wrote {} predictions to {}",
        predictions.len(),
        args.out.display()
    );
    Ok(())
}

fn eval_data(args: &EvalArgs, model: &Model) -> Result<Dataset64> {
    let run = prepare(&run_spec(&args.data, None)?)?;
    if run.train.feature_names() != model.feature_names() {
        bail!(
            "model features [{}] do not match input features [{}]",
            model.feature_names().join(", "),
            run.train.feature_names().join(", ")
        );
    }
    Ok(match args.on {
        Part::Train => run.train,
        Part::Valid => run.valid,
        Part::Test => run.test,
        Part::All => {
            let n = run.train.n_samples() + run.valid.n_samples() + run.test.n_samples();
            let mut columns = vec![Vec::with_capacity(n); model.n_features()];
            let mut target = Vec::with_capacity(n);
            for part in [&run.train, &run.valid, &run.test] {
                for (c, col) in columns.iter_mut().enumerate() {
                    col.extend_from_slice(part.column(c));
                }
                target.extend_from_slice(part.target());
            }
            Dataset64::new(columns, target, model.feature_names().to_vec())?
        }
    })
}

fn cmd_importance(args: EvalArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let data = eval_data(&args, &model)?;
    let report = compute_effects(&model, &data)?;
    if report.all_zero {
        eprintln!("warning: every term is zero on this data, importances are all 0");
    }
    write_file(&args.out, &report.to_csv(model.feature_names()))?;
    for t in report.ranked() {
        println!(
            "{:<40} {:.4}",
            t.term.label(model.feature_names()),
            t.importance
        );
    }
    Ok(())
}

fn cmd_plot(args: EvalArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let data = eval_data(&args, &model)?;
    let written = export_plots(&model, &data, &args.out)?;
    for path in &written {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let base = run_spec(&args.data, Some(&args.training))?;
    let mut tables = Vec::new();
    let mut csv = String::new();
    for seed in args.data.seed..args.data.seed + args.seeds {
        let spec = RunSpec {
            seed,
            ..base.clone()
        };
        let table = bench_prepared(&prepare(&spec)?)?;
        println!("seed {seed}\n{}", table.to_text());
        let text = table.to_csv();
        csv.push_str(if csv.is_empty() {
            &text
        } else {
            text.split_once('\n').map_or("", |(_, rows)| rows)
        });
        tables.push(table);
    }
    if tables.len() > 1 {
        println!(
            "median over {} seeds\n{}",
            tables.len(),
            median_table(&tables)?.to_text()
        );
    }
    write_file(&args.out, &csv)?;
    std::io::stdout().flush()?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Importance(args) => cmd_importance(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Bench(args) => cmd_bench(args),
    }
}
