//! Losses and the hybrid training loop.

mod cobyla;

pub use cobyla::{minimize, Minimum, ObjectiveSpec};

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{ModelKind, QuantumModel, Topology};
use crate::seed::{stage_rng, Stage};

const PROB_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossKind {
    #[default]
    Bce,
    Squared,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Bce => "bce",
            LossKind::Squared => "squared",
        })
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bce" => Ok(LossKind::Bce),
            "squared" | "mse" => Ok(LossKind::Squared),
            other => Err(Error::InvalidArgument(format!("unknown loss {other:?}"))),
        }
    }
}

/// Class-1 probability read off an expectation: `(1 - e) / 2`.
pub fn class_one_probability(expectation: f64) -> f64 {
    (1.0 - expectation) / 2.0
}

/// Mean loss of expectations against 0/1 labels.
pub fn loss(expectations: &[f64], labels: &[u8], kind: LossKind) -> Result<f64> {
    if expectations.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} expectations for {} labels",
            expectations.len(),
            labels.len()
        )));
    }
    if expectations.is_empty() {
        return Err(Error::InvalidArgument("empty loss input".into()));
    }
    let total: f64 = expectations
        .iter()
        .zip(labels)
        .map(|(&e, &y)| {
            let p = class_one_probability(e).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            let y = f64::from(y);
            match kind {
                LossKind::Bce => -(y * p.ln() + (1.0 - y) * (1.0 - p).ln()),
                LossKind::Squared => (p - y).powi(2),
            }
        })
        .sum();
    Ok(total / expectations.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Objective evaluation budget.
    pub iterations: usize,
    pub seed: u64,
    pub loss_kind: LossKind,
    pub trust_region_initial: f64,
    pub trust_region_final: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            iterations: 100,
            seed: 42,
            loss_kind: LossKind::Bce,
            trust_region_initial: 1.0,
            trust_region_final: 1e-4,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidArgument(
                "optimizer budget must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Loss at every objective evaluation, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingLog {
    pub optimizer: String,
    pub losses: Vec<f64>,
    pub wall_time_seconds: f64,
}

impl TrainingLog {
    pub fn to_text(&self) -> String {
        let mut out = String::from("eval_index,loss\n");
        for (i, l) in self.losses.iter().enumerate() {
            writeln!(out, "{i},{l:.16e}").unwrap();
        }
        writeln!(out, "# optimizer = {}", self.optimizer).unwrap();
        writeln!(out, "# evaluations = {}", self.losses.len()).unwrap();
        writeln!(out, "# wall_time_seconds = {:.6}", self.wall_time_seconds).unwrap();
        out
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: QuantumModel,
    pub initial_loss: f64,
    pub best_loss: f64,
    pub log: TrainingLog,
}

/// Expectations of `model` over every row, computed in parallel, in row order.
pub fn expectations(model: &QuantumModel, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    rows.par_iter()
        .map(|x| model.predict(x).map(|p| p.expectation))
        .collect()
}

/// Seeded starting model for `kind`.
pub fn initial_model(kind: &ModelKind, topology: &Topology, seed: u64) -> QuantumModel {
    let mut rng = stage_rng(seed, Stage::Init);
    let mut frozen = stage_rng(seed, Stage::Frozen);
    QuantumModel::init(kind, topology, &mut rng, &mut frozen)
}

/// Fit a quantum model by derivative-free minimization of the training loss
/// over its trainable angles.
pub fn train(
    kind: &ModelKind,
    topology: &Topology,
    rows: &[Vec<f64>],
    labels: &[u8],
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if rows.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} rows for {} labels",
            rows.len(),
            labels.len()
        )));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != topology.num_features()) {
        return Err(Error::Shape(format!(
            "row has {} features, model expects {}",
            bad.len(),
            topology.num_features()
        )));
    }
    let start = Instant::now();
    let init = initial_model(kind, topology, config.seed);
    let spec = ObjectiveSpec {
        initial_point: init.trainable(),
        budget: config.iterations,
        trust_region_initial: config.trust_region_initial,
        trust_region_final: config.trust_region_final,
    };
    let mut losses = Vec::with_capacity(config.iterations);
    let mut failure: Option<Error> = None;
    let result = minimize(&spec, |theta| {
        let value = init
            .with_trainable(theta)
            .and_then(|m| expectations(&m, rows))
            .and_then(|e| loss(&e, labels, config.loss_kind));
        match value {
            Ok(v) => {
                losses.push(v);
                v
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let min = result?;
    let model = init.with_trainable(&min.point)?;
    Ok(TrainOutcome {
        model,
        initial_loss: losses[0],
        best_loss: min.value,
        log: TrainingLog {
            optimizer: "cobyla".into(),
            losses,
            wall_time_seconds: start.elapsed().as_secs_f64(),
        },
    })
}
