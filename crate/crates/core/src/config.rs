//! Run configuration: line-oriented `key = value` files, with command-line
//! overrides applied through the same [`RunConfig::set`] entry point.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::models::{ModelKind, Topology};
use crate::optimize::{LossKind, TrainConfig};

/// Every key a config file or flag may set.
pub const KEYS: [&str; 22] = [
    "dataset",
    "label_column",
    "positive_label",
    "exclude_columns",
    "pca_k",
    "train_fraction",
    "balance",
    "model",
    "topology",
    "feature_map_reps",
    "ansatz_reps",
    "budget",
    "loss",
    "seed",
    "out_dir",
    "prepared_dir",
    "rho_begin",
    "rho_end",
    "mlp_epochs",
    "mlp_learning_rate",
    "train_file",
    "test_file",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset: Option<PathBuf>,
    pub label_column: String,
    pub positive_label: String,
    pub exclude_columns: Vec<String>,
    pub pca_k: usize,
    pub train_fraction: f64,
    pub balance: bool,
    pub model: String,
    pub topology: Vec<usize>,
    pub feature_map_reps: usize,
    pub ansatz_reps: usize,
    pub budget: usize,
    pub loss: LossKind,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Where `train`, `evaluate` and `compare` look for prepared files.
    /// Empty means `out_dir`.
    pub prepared_dir: Option<PathBuf>,
    pub rho_begin: f64,
    pub rho_end: f64,
    pub mlp_epochs: usize,
    pub mlp_learning_rate: f64,
    pub train_file: Option<PathBuf>,
    pub test_file: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            label_column: "label".into(),
            positive_label: "1".into(),
            exclude_columns: Vec::new(),
            pca_k: 7,
            train_fraction: 0.8,
            balance: false,
            model: "CFFQNN".into(),
            topology: vec![3, 2, 1],
            feature_map_reps: 2,
            ansatz_reps: 2,
            budget: 100,
            loss: LossKind::Bce,
            seed: 42,
            out_dir: PathBuf::from("out"),
            prepared_dir: None,
            rho_begin: 1.0,
            rho_end: 1e-4,
            mlp_epochs: 5000,
            mlp_learning_rate: 0.5,
            train_file: None,
            test_file: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::InvalidArgument(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

fn opt_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "dataset" => self.dataset = opt_path(value),
            "label_column" => self.label_column = value.to_string(),
            "positive_label" => self.positive_label = value.to_string(),
            "exclude_columns" => {
                self.exclude_columns = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "pca_k" => self.pca_k = parse_num(key, value)?,
            "train_fraction" => self.train_fraction = parse_num(key, value)?,
            "balance" => self.balance = parse_bool(key, value)?,
            "model" => {
                if !value.eq_ignore_ascii_case("MLP") {
                    value.parse::<ModelKind>()?;
                }
                self.model = value.to_ascii_uppercase();
            }
            "topology" => self.topology = Topology::parse_widths(value)?,
            "feature_map_reps" => self.feature_map_reps = parse_num(key, value)?,
            "ansatz_reps" => self.ansatz_reps = parse_num(key, value)?,
            "budget" => self.budget = parse_num(key, value)?,
            "loss" => self.loss = value.parse()?,
            "seed" => self.seed = parse_num(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "prepared_dir" => self.prepared_dir = opt_path(value),
            "rho_begin" => self.rho_begin = parse_num(key, value)?,
            "rho_end" => self.rho_end = parse_num(key, value)?,
            "mlp_epochs" => self.mlp_epochs = parse_num(key, value)?,
            "mlp_learning_rate" => self.mlp_learning_rate = parse_num(key, value)?,
            "train_file" => self.train_file = opt_path(value),
            "test_file" => self.test_file = opt_path(value),
            other => {
                return Err(Error::InvalidArgument(format!("unknown config key {other:?}")))
            }
        }
        Ok(())
    }

    /// Apply a config file on top of `self`. Blank lines and `#` comments are
    /// ignored; a repeated key keeps its last value.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected key = value"))?;
            self.set(k, v).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Every key with its resolved value; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            writeln!(out, "{key} = {}", self.get(key)).unwrap();
        }
        out
    }

    fn get(&self, key: &str) -> String {
        match key {
            "dataset" => show_path(&self.dataset),
            "label_column" => self.label_column.clone(),
            "positive_label" => self.positive_label.clone(),
            "exclude_columns" => self.exclude_columns.join(","),
            "pca_k" => self.pca_k.to_string(),
            "train_fraction" => self.train_fraction.to_string(),
            "balance" => self.balance.to_string(),
            "model" => self.model.clone(),
            "topology" => crate::models::join_widths(&self.topology),
            "feature_map_reps" => self.feature_map_reps.to_string(),
            "ansatz_reps" => self.ansatz_reps.to_string(),
            "budget" => self.budget.to_string(),
            "loss" => self.loss.to_string(),
            "seed" => self.seed.to_string(),
            "out_dir" => self.out_dir.display().to_string(),
            "prepared_dir" => show_path(&self.prepared_dir),
            "rho_begin" => format!("{:e}", self.rho_begin),
            "rho_end" => format!("{:e}", self.rho_end),
            "mlp_epochs" => self.mlp_epochs.to_string(),
            "mlp_learning_rate" => self.mlp_learning_rate.to_string(),
            "train_file" => show_path(&self.train_file),
            "test_file" => show_path(&self.test_file),
            _ => unreachable!("key list and getter disagree"),
        }
    }

    pub fn prepared_dir(&self) -> PathBuf {
        self.prepared_dir.clone().unwrap_or_else(|| self.out_dir.clone())
    }

    pub fn train_path(&self) -> PathBuf {
        self.train_file
            .clone()
            .unwrap_or_else(|| self.prepared_dir().join("train.prepared"))
    }

    pub fn test_path(&self) -> PathBuf {
        self.test_file
            .clone()
            .unwrap_or_else(|| self.prepared_dir().join("test.prepared"))
    }

    pub fn is_mlp(&self) -> bool {
        self.model.eq_ignore_ascii_case("MLP")
    }

    /// The configured quantum model family, with baseline reps applied.
    pub fn model_kind(&self) -> Result<ModelKind> {
        let kind: ModelKind = self.model.parse()?;
        Ok(match kind {
            ModelKind::QnnBaseline { .. } => ModelKind::QnnBaseline {
                feature_map_reps: self.feature_map_reps,
                ansatz_reps: self.ansatz_reps,
            },
            k => k,
        })
    }

    pub fn topology(&self) -> Result<Topology> {
        Topology::new(self.topology.clone(), self.pca_k)
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            iterations: self.budget,
            seed: self.seed,
            loss_kind: self.loss,
            trust_region_initial: self.rho_begin,
            trust_region_final: self.rho_end,
        }
    }
}
