//! The prepare → train → evaluate → compare pipeline. Each `cmd_*` function
//! reads and writes files under the configured directories and drops the
//! resolved config next to its outputs; the in-memory steps they wrap are
//! public too.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{ParamsFile, TrainedModel};
use crate::circuit::ResourceReport;
use crate::config::RunConfig;
use crate::data::{
    balance, ingest_csv, split, CsvSchema, Dataset, PcaTransform, PreparedData, ScaleTransform,
};
use crate::error::{Error, Result};
use crate::metrics::{
    comparison_table, compute_metrics, confusion, ComparisonEntry, ComparisonReport, MetricsReport,
};
use crate::mlp::MlpModel;
use crate::models::{
    ansatz_reps_for_at_least, trainable_parameter_count, ModelKind, QuantumModel, Topology,
};
use crate::optimize::{train, TrainingLog};
use crate::seed::{stage_seed, Stage};

pub const CONFIG_FILE: &str = "resolved_config.txt";
pub const PARAMS_FILE: &str = "params.txt";
pub const LOG_FILE: &str = "training_log.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const PREPARE_REPORT_FILE: &str = "prepare_report.json";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_config(dir: &Path, config: &RunConfig) -> Result<()> {
    write(&dir.join(CONFIG_FILE), &config.to_text())
}

pub fn read_prepared(path: &Path) -> Result<PreparedData> {
    PreparedData::parse(&read(path)?)
}

pub fn read_params(path: &Path) -> Result<ParamsFile> {
    ParamsFile::parse(&read(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepareReport {
    pub input_rows: usize,
    pub skipped_rows: usize,
    pub balanced: bool,
    pub rows_used: usize,
    /// `[negatives, positives]` after optional balancing.
    pub class_counts: [usize; 2],
    pub train_rows: usize,
    pub test_rows: usize,
    pub pca_k: usize,
    pub explained_variance: Vec<f64>,
    pub pca_digest: String,
    pub scale_digest: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub train: PreparedData,
    pub test: PreparedData,
    pub pca: PcaTransform,
    pub scale: ScaleTransform,
    pub report: PrepareReport,
}

/// Balance (optionally), split, fit PCA and scaling on the training rows,
/// and transform both partitions.
pub fn prepare_dataset(dataset: &Dataset, skipped: usize, config: &RunConfig) -> Result<Prepared> {
    let input_rows = dataset.len() + skipped;
    let data = if config.balance {
        balance(dataset, stage_seed(config.seed, Stage::Balance))?
    } else {
        dataset.clone()
    };
    let (train_set, test_set) = split(&data, config.train_fraction, stage_seed(config.seed, Stage::Split))?;
    let pca = PcaTransform::fit(&train_set.features, config.pca_k)?;
    let train_reduced = pca.apply(&train_set.features)?;
    let test_reduced = pca.apply(&test_set.features)?;
    let scale = ScaleTransform::fit(&train_reduced)?;
    let make = |partition: &str, rows: Vec<Vec<f64>>, labels: Vec<u8>| PreparedData {
        k: config.pca_k,
        seed: config.seed,
        partition: partition.to_string(),
        pca_digest: pca.digest(),
        scale_digest: scale.digest(),
        features: rows,
        labels,
    };
    let train = make("train", scale.apply(&train_reduced)?, train_set.labels.clone());
    let test = make("test", scale.apply(&test_reduced)?, test_set.labels.clone());
    let report = PrepareReport {
        input_rows,
        skipped_rows: skipped,
        balanced: config.balance,
        rows_used: data.len(),
        class_counts: data.class_counts(),
        train_rows: train.len(),
        test_rows: test.len(),
        pca_k: config.pca_k,
        explained_variance: pca.explained_variance.clone(),
        pca_digest: pca.digest(),
        scale_digest: scale.digest(),
        seed: config.seed,
    };
    Ok(Prepared {
        train,
        test,
        pca,
        scale,
        report,
    })
}

/// Ingest the configured CSV and write `train.prepared`, `test.prepared`,
/// the preparation report and the resolved config into `out_dir`.
pub fn cmd_prepare(config: &RunConfig) -> Result<PrepareReport> {
    let path = config
        .dataset
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("no dataset given".into()))?;
    let schema = CsvSchema {
        label_column: config.label_column.clone(),
        positive_label: config.positive_label.clone(),
        exclude_columns: config.exclude_columns.clone(),
    };
    let ingested = ingest_csv(path, &schema)?;
    let prepared = prepare_dataset(&ingested.dataset, ingested.skipped, config)?;
    let dir = &config.out_dir;
    write(&dir.join("train.prepared"), &prepared.train.to_text())?;
    write(&dir.join("test.prepared"), &prepared.test.to_text())?;
    write(
        &dir.join(PREPARE_REPORT_FILE),
        &serde_json::to_string_pretty(&prepared.report).expect("report serializes"),
    )?;
    write_config(dir, config)?;
    Ok(prepared.report)
}

/// Which model a training run fits.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Quantum(ModelKind, Topology),
    /// Layer widths, input included.
    Mlp(Vec<usize>),
}

impl ModelSpec {
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        if config.is_mlp() {
            let mut widths = vec![config.pca_k];
            widths.extend_from_slice(&config.topology);
            Ok(ModelSpec::Mlp(widths))
        } else {
            Ok(ModelSpec::Quantum(config.model_kind()?, config.topology()?))
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainedRun {
    pub params: ParamsFile,
    pub log: TrainingLog,
}

fn check_prepared(data: &PreparedData, config: &RunConfig) -> Result<()> {
    if data.k != config.pca_k {
        return Err(Error::Consistency(format!(
            "prepared file has {} features but pca_k is {}",
            data.k, config.pca_k
        )));
    }
    if data.is_empty() {
        return Err(Error::InvalidArgument("prepared file has no rows".into()));
    }
    Ok(())
}

pub fn train_spec(spec: &ModelSpec, data: &PreparedData, config: &RunConfig) -> Result<TrainedRun> {
    check_prepared(data, config)?;
    let (model, log) = match spec {
        ModelSpec::Quantum(kind, topology) => {
            let out = train(kind, topology, &data.features, &data.labels, &config.train_config())?;
            (TrainedModel::Quantum(out.model), out.log)
        }
        ModelSpec::Mlp(widths) => {
            if config.mlp_epochs == 0 {
                return Err(Error::InvalidArgument("mlp_epochs must be >= 1".into()));
            }
            let start = Instant::now();
            let mut m = MlpModel::seeded(widths, stage_seed(config.seed, Stage::Mlp))?;
            let mut losses = vec![m.loss(&data.features, &data.labels)?];
            for _ in 0..config.mlp_epochs {
                m = m.train(&data.features, &data.labels, 1, config.mlp_learning_rate)?;
                let l = m.loss(&data.features, &data.labels)?;
                if !l.is_finite() {
                    return Err(Error::NonFinite {
                        eval: losses.len(),
                        value: l,
                    });
                }
                losses.push(l);
            }
            let log = TrainingLog {
                optimizer: "gradient_descent".into(),
                losses,
                wall_time_seconds: start.elapsed().as_secs_f64(),
            };
            (TrainedModel::Mlp(m), log)
        }
    };
    Ok(TrainedRun {
        params: ParamsFile {
            model,
            seed: config.seed,
            pca_k: config.pca_k,
            pca_digest: data.pca_digest.clone(),
            scale_digest: data.scale_digest.clone(),
        },
        log,
    })
}

fn write_run(dir: &Path, run: &TrainedRun, config: &RunConfig) -> Result<()> {
    write(&dir.join(PARAMS_FILE), &run.params.to_text())?;
    write(&dir.join(LOG_FILE), &run.log.to_text())?;
    write_config(dir, config)
}

/// Train the configured model on the prepared training file and write the
/// parameter file, the loss log and the resolved config into `out_dir`.
pub fn cmd_train(config: &RunConfig) -> Result<TrainedRun> {
    let spec = ModelSpec::from_config(config)?;
    config.train_config().validate()?;
    let data = read_prepared(&config.train_path())?;
    let run = train_spec(&spec, &data, config)?;
    write_run(&config.out_dir, &run, config)?;
    Ok(run)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub rows: usize,
    pub metrics: MetricsReport,
}

/// Refuses data that was not produced by the preprocessing the model saw.
pub fn evaluate(params: &ParamsFile, data: &PreparedData) -> Result<EvaluationReport> {
    if params.pca_k != data.k || params.model.num_features() != data.k {
        return Err(Error::Consistency(format!(
            "model expects {} features (pca_k {}), data has {}",
            params.model.num_features(),
            params.pca_k,
            data.k
        )));
    }
    if params.pca_digest != data.pca_digest || params.scale_digest != data.scale_digest {
        return Err(Error::Consistency(
            "transform digests of model and data differ".into(),
        ));
    }
    if data.is_empty() {
        return Err(Error::InvalidArgument("no rows to evaluate".into()));
    }
    let preds = data
        .features
        .par_iter()
        .map(|x| params.model.predict_class(x))
        .collect::<Result<Vec<u8>>>()?;
    let metrics = compute_metrics(confusion(&preds, &data.labels)?)?;
    Ok(EvaluationReport {
        model: params.model.name().to_string(),
        rows: data.len(),
        metrics,
    })
}

/// Score a parameter file on the prepared test file; writes `metrics.json`.
pub fn cmd_evaluate(params_path: &Path, config: &RunConfig) -> Result<EvaluationReport> {
    let params = read_params(params_path)?;
    let data = read_prepared(&config.test_path())?;
    if params.pca_k != config.pca_k {
        return Err(Error::Consistency(format!(
            "parameter file was trained with pca_k {} but pca_k is {}",
            params.pca_k, config.pca_k
        )));
    }
    let report = evaluate(&params, &data)?;
    write(
        &config.out_dir.join(METRICS_FILE),
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    write_config(&config.out_dir, config)?;
    Ok(report)
}

/// The five compared models, in report order.
pub fn comparison_specs(config: &RunConfig) -> Result<Vec<(String, ModelSpec)>> {
    let topology = config.topology()?;
    let mut mlp = vec![config.pca_k];
    mlp.extend_from_slice(&config.topology);
    let qnn = |ansatz_reps| ModelKind::QnnBaseline {
        feature_map_reps: config.feature_map_reps,
        ansatz_reps,
    };
    let target = trainable_parameter_count(&ModelKind::Cffqnn, &topology);
    let extra_reps = ansatz_reps_for_at_least(config.pca_k, target);
    Ok(vec![
        ("MLP".into(), ModelSpec::Mlp(mlp)),
        ("CFFQNN".into(), ModelSpec::Quantum(ModelKind::Cffqnn, topology.clone())),
        ("FixedCFFQNN".into(), ModelSpec::Quantum(ModelKind::FixedCffqnn, topology.clone())),
        ("QNN".into(), ModelSpec::Quantum(qnn(config.ansatz_reps), topology.clone())),
        ("QNN-extra-params".into(), ModelSpec::Quantum(qnn(extra_reps), topology)),
    ])
}

pub fn resource_report(model: &QuantumModel) -> Result<ResourceReport> {
    Ok(model
        .resource_circuit()?
        .count_resources(model.trainable().len()))
}

fn compare_one(
    spec: &ModelSpec,
    train_data: &PreparedData,
    test_data: &PreparedData,
    config: &RunConfig,
    dir: Option<&Path>,
) -> Result<(MetricsReport, ResourceReport)> {
    let run = train_spec(spec, train_data, config)?;
    if let Some(dir) = dir {
        write_run(dir, &run, config)?;
    }
    let eval = evaluate(&run.params, test_data)?;
    if let Some(dir) = dir {
        write(
            &dir.join(METRICS_FILE),
            &serde_json::to_string_pretty(&eval).expect("report serializes"),
        )?;
    }
    let mut resources = match &run.params.model {
        TrainedModel::Quantum(m) => resource_report(m)?,
        TrainedModel::Mlp(m) => ResourceReport {
            num_qubits: 0,
            depth: m.widths().len() - 1,
            native_controlled_ops: 0,
            cnot_count: 0,
            cry_count: 0,
            cnot_equivalent: 0,
            coupled_pairs: 0,
            single_qubit_gates: 0,
            trainable_parameters: m.parameter_count(),
            wall_time_seconds: None,
        },
    };
    resources.wall_time_seconds = Some(run.log.wall_time_seconds);
    Ok((eval.metrics, resources))
}

/// Train and score every compared model on the same prepared data with the
/// same seed and budget. Runs go in parallel; a failed run is recorded and
/// the rest continue. With `out_dir`, each run writes into its own
/// subdirectory and the report lands in `comparison.json` / `.csv`.
pub fn compare(
    train_data: &PreparedData,
    test_data: &PreparedData,
    config: &RunConfig,
    out_dir: Option<&Path>,
) -> Result<ComparisonReport> {
    config.train_config().validate()?;
    let specs = comparison_specs(config)?;
    let entries: Vec<ComparisonEntry> = specs
        .par_iter()
        .map(|(name, spec)| {
            let dir: Option<PathBuf> = out_dir.map(|d| d.join(name));
            match compare_one(spec, train_data, test_data, config, dir.as_deref()) {
                Ok((m, r)) => ComparisonEntry::ok(name.clone(), m, Some(r)),
                Err(e) => ComparisonEntry::failed(name.clone(), e),
            }
        })
        .collect();
    let report = comparison_table(&entries);
    if let Some(dir) = out_dir {
        write(&dir.join("comparison.json"), &report.to_json())?;
        write(&dir.join("comparison.csv"), &report.to_csv())?;
        write_config(dir, config)?;
    }
    Ok(report)
}

pub fn cmd_compare(config: &RunConfig) -> Result<ComparisonReport> {
    let train_data = read_prepared(&config.train_path())?;
    let test_data = read_prepared(&config.test_path())?;
    if train_data.pca_digest != test_data.pca_digest || train_data.scale_digest != test_data.scale_digest {
        return Err(Error::Consistency(
            "train and test files come from different preparations".into(),
        ));
    }
    compare(&train_data, &test_data, config, Some(&config.out_dir))
}

/// Gate counts of the configured quantum model, without training.
pub fn cmd_resources(config: &RunConfig) -> Result<ResourceReport> {
    if config.is_mlp() {
        return Err(Error::InvalidArgument(
            "resource counts apply to quantum models only".into(),
        ));
    }
    let kind = config.model_kind()?;
    let model = crate::optimize::initial_model(&kind, &config.topology()?, config.seed);
    resource_report(&model)
}
