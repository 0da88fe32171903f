use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cffqnn::config::RunConfig;
use cffqnn::workflow;
use cffqnn::{Error, Result};

/// Train and compare coherent feed-forward quantum neural networks against
/// QNN and MLP baselines.
#[derive(Parser)]
#[command(name = "cffqnn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a CSV, balance, split, reduce with PCA and scale to [0, pi].
    Prepare(RunArgs),
    /// Fit one model on the prepared training file.
    Train(RunArgs),
    /// Score a parameter file on the prepared test file.
    Evaluate {
        /// Parameter file written by `train`.
        #[arg(long)]
        params: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Train and score MLP, CFFQNN, FixedCFFQNN, QNN and the extra-parameter QNN.
    Compare(RunArgs),
    /// Print gate counts for a model without training it.
    Resources(RunArgs),
}

/// Every flag mirrors a config key; flags win over `--config`.
#[derive(Args, Default)]
struct RunArgs {
    /// `key = value` file supplying any of the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    positive_label: Option<String>,
    /// Comma-separated column names to drop.
    #[arg(long)]
    exclude_columns: Option<String>,
    #[arg(long)]
    pca_k: Option<String>,
    #[arg(long)]
    train_fraction: Option<String>,
    /// Undersample the majority class before splitting.
    #[arg(long)]
    balance: Option<String>,
    /// CFFQNN, FIXED_CFFQNN, QNN or MLP.
    #[arg(long)]
    model: Option<String>,
    /// Layer widths such as `3,2,1`.
    #[arg(long)]
    topology: Option<String>,
    #[arg(long)]
    feature_map_reps: Option<String>,
    #[arg(long)]
    ansatz_reps: Option<String>,
    /// Objective evaluations for the quantum optimizer.
    #[arg(long)]
    budget: Option<String>,
    /// bce or squared.
    #[arg(long)]
    loss: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    prepared_dir: Option<String>,
    #[arg(long)]
    rho_begin: Option<String>,
    #[arg(long)]
    rho_end: Option<String>,
    #[arg(long)]
    mlp_epochs: Option<String>,
    #[arg(long)]
    mlp_learning_rate: Option<String>,
    #[arg(long)]
    train_file: Option<String>,
    #[arg(long)]
    test_file: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            config.apply_text(&text)?;
        }
        let overrides = [
            ("dataset", &self.dataset),
            ("label_column", &self.label_column),
            ("positive_label", &self.positive_label),
            ("exclude_columns", &self.exclude_columns),
            ("pca_k", &self.pca_k),
            ("train_fraction", &self.train_fraction),
            ("balance", &self.balance),
            ("model", &self.model),
            ("topology", &self.topology),
            ("feature_map_reps", &self.feature_map_reps),
            ("ansatz_reps", &self.ansatz_reps),
            ("budget", &self.budget),
            ("loss", &self.loss),
            ("seed", &self.seed),
            ("out_dir", &self.out_dir),
            ("prepared_dir", &self.prepared_dir),
            ("rho_begin", &self.rho_begin),
            ("rho_end", &self.rho_end),
            ("mlp_epochs", &self.mlp_epochs),
            ("mlp_learning_rate", &self.mlp_learning_rate),
            ("train_file", &self.train_file),
            ("test_file", &self.test_file),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        Ok(config)
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Prepare(args) => {
            let report = workflow::cmd_prepare(&args.resolve()?)?;
            Ok(json(&report))
        }
        Command::Train(args) => {
            let config = args.resolve()?;
            let run = workflow::cmd_train(&config)?;
            Ok(format!(
                "trained {} ({} parameters, {} evaluations, final loss {:.6}) -> {}",
                run.params.model.name(),
                run.params.model.trainable_count(),
                run.log.losses.len(),
                run.log.losses.iter().copied().fold(f64::INFINITY, f64::min),
                config.out_dir.join(workflow::PARAMS_FILE).display()
            ))
        }
        Command::Evaluate { params, run } => {
            let report = workflow::cmd_evaluate(&params, &run.resolve()?)?;
            Ok(json(&report))
        }
        Command::Compare(args) => Ok(workflow::cmd_compare(&args.resolve()?)?.to_csv()),
        Command::Resources(args) => Ok(json(&workflow::cmd_resources(&args.resolve()?)?)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            // a closed pipe (`cffqnn compare | head`) is not an error
            let _ = writeln!(std::io::stdout(), "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
