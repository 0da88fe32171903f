//! Confusion-matrix metrics and the model comparison report.
//!
//! Ratios whose denominator is zero are `None` and render as JSON `null`
//! (or an empty CSV cell), never as 0.

use serde::{Deserialize, Serialize};

use crate::circuit::ResourceReport;
use crate::error::{Error, Result};

/// Class 1 is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(predictions: &[u8], labels: &[u8]) -> Result<ConfusionCounts> {
    if predictions.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::InvalidArgument("no predictions".into()));
    }
    let mut c = ConfusionCounts::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p != 0, y != 0) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub f1: Option<f64>,
    pub counts: ConfusionCounts,
}

pub fn compute_metrics(counts: ConfusionCounts) -> Result<MetricsReport> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidArgument("confusion counts are all zero".into()));
    }
    let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
    let precision = ratio(counts.tp, counts.tp + counts.fp);
    let recall = ratio(counts.tp, counts.tp + counts.fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Ok(MetricsReport {
        precision,
        recall,
        accuracy: (counts.tp + counts.tn) as f64 / total as f64,
        f1,
        counts,
    })
}

/// One model's outcome in a comparison run.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub name: String,
    pub metrics: Option<MetricsReport>,
    pub resources: Option<ResourceReport>,
    /// Set when the sub-run failed; metrics are then absent.
    pub error: Option<String>,
}

impl ComparisonEntry {
    pub fn ok(name: impl Into<String>, metrics: MetricsReport, resources: Option<ResourceReport>) -> Self {
        Self {
            name: name.into(),
            metrics: Some(metrics),
            resources,
            error: None,
        }
    }

    pub fn failed(name: impl Into<String>, error: impl ToString) -> Self {
        Self {
            name: name.into(),
            metrics: None,
            resources: None,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub name: String,
    pub status: String,
    pub error: Option<String>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: Option<f64>,
    pub f1: Option<f64>,
    pub depth: Option<usize>,
    pub native_controlled_ops: Option<usize>,
    pub cnot_count: Option<usize>,
    pub cnot_equivalent: Option<usize>,
    pub coupled_pairs: Option<usize>,
    pub trainable_parameters: Option<usize>,
    pub wall_time_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub records: Vec<ComparisonRecord>,
}

const CSV_COLUMNS: [&str; 14] = [
    "name",
    "status",
    "precision",
    "recall",
    "accuracy",
    "f1",
    "depth",
    "native_controlled_ops",
    "cnot_count",
    "cnot_equivalent",
    "coupled_pairs",
    "trainable_parameters",
    "wall_time_seconds",
    "error",
];

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        fn cell<T: ToString>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for r in &self.records {
            let row = [
                r.name.clone(),
                r.status.clone(),
                cell(r.precision),
                cell(r.recall),
                cell(r.accuracy),
                cell(r.f1),
                cell(r.depth),
                cell(r.native_controlled_ops),
                cell(r.cnot_count),
                cell(r.cnot_equivalent),
                cell(r.coupled_pairs),
                cell(r.trainable_parameters),
                cell(r.wall_time_seconds),
                r.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// One record per entry, in the order given.
pub fn comparison_table(entries: &[ComparisonEntry]) -> ComparisonReport {
    let records = entries
        .iter()
        .map(|e| {
            let m = e.metrics.as_ref();
            let r = e.resources.as_ref();
            ComparisonRecord {
                name: e.name.clone(),
                status: if e.error.is_some() { "failed" } else { "ok" }.to_string(),
                error: e.error.clone(),
                precision: m.and_then(|m| m.precision),
                recall: m.and_then(|m| m.recall),
                accuracy: m.map(|m| m.accuracy),
                f1: m.and_then(|m| m.f1),
                depth: r.map(|r| r.depth),
                native_controlled_ops: r.map(|r| r.native_controlled_ops),
                cnot_count: r.map(|r| r.cnot_count),
                cnot_equivalent: r.map(|r| r.cnot_equivalent),
                coupled_pairs: r.map(|r| r.coupled_pairs),
                trainable_parameters: r.map(|r| r.trainable_parameters),
                wall_time_seconds: r.and_then(|r| r.wall_time_seconds),
            }
        })
        .collect();
    ComparisonReport { records }
}
