//! Trained-parameter files.
//!
//! ```text
//! #cffqnn-params
//! model = FIXED_CFFQNN
//! layers = 3,2,1
//! num_features = 7
//! seed = 42
//! pca_k = 7
//! pca_digest = 1f0c...
//! scale_digest = 9a41...
//! [frozen] 24
//! -4.1318796343210197e-1
//! ...
//! [trainable] 11
//! ...
//! ```
//!
//! QNN files carry `feature_map_reps` and `ansatz_reps` instead of `layers`.
//! MLP files list every layer width, input included, under `layers`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::models::{join_widths, ModelKind, ParameterSet, QuantumModel, Topology};

const MAGIC: &str = "#cffqnn-params";

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Quantum(QuantumModel),
    Mlp(MlpModel),
}

impl TrainedModel {
    pub fn name(&self) -> &'static str {
        match self {
            TrainedModel::Quantum(m) => m.kind().name(),
            TrainedModel::Mlp(_) => "MLP",
        }
    }

    pub fn num_features(&self) -> usize {
        match self {
            TrainedModel::Quantum(m) => m.num_features(),
            TrainedModel::Mlp(m) => m.widths()[0],
        }
    }

    pub fn predict_class(&self, features: &[f64]) -> Result<u8> {
        match self {
            TrainedModel::Quantum(m) => m.predict(features).map(|p| p.class),
            TrainedModel::Mlp(m) => m.predict_class(features),
        }
    }

    pub fn trainable_count(&self) -> usize {
        match self {
            TrainedModel::Quantum(m) => m.trainable().len(),
            TrainedModel::Mlp(m) => m.parameter_count(),
        }
    }
}

/// A trained model plus the preprocessing it was fit against.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamsFile {
    pub model: TrainedModel,
    pub seed: u64,
    pub pca_k: usize,
    pub pca_digest: String,
    pub scale_digest: String,
}

impl ParamsFile {
    pub fn to_text(&self) -> String {
        let mut out = format!("{MAGIC}\nmodel = {}\n", self.model.name());
        let (frozen, trainable) = match &self.model {
            TrainedModel::Quantum(m) => {
                match m {
                    QuantumModel::Cffqnn { topology, .. } => {
                        writeln!(out, "layers = {}", topology).unwrap();
                    }
                    QuantumModel::Qnn {
                        feature_map_reps,
                        ansatz_reps,
                        ..
                    } => {
                        writeln!(out, "feature_map_reps = {feature_map_reps}").unwrap();
                        writeln!(out, "ansatz_reps = {ansatz_reps}").unwrap();
                    }
                }
                (m.frozen(), m.trainable())
            }
            TrainedModel::Mlp(m) => {
                writeln!(out, "layers = {}", join_widths(m.widths())).unwrap();
                (Vec::new(), m.to_flat())
            }
        };
        writeln!(out, "num_features = {}", self.model.num_features()).unwrap();
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "pca_k = {}", self.pca_k).unwrap();
        writeln!(out, "pca_digest = {}", self.pca_digest).unwrap();
        writeln!(out, "scale_digest = {}", self.scale_digest).unwrap();
        for (name, values) in [("frozen", &frozen), ("trainable", &trainable)] {
            writeln!(out, "[{name}] {}", values.len()).unwrap();
            for v in values {
                writeln!(out, "{v:.16e}").unwrap();
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, MAGIC)) => {}
            Some((n, _)) => return Err(Error::parse(n, format!("expected {MAGIC}"))),
            None => return Err(Error::parse(1, "empty parameter file")),
        }

        let mut header: Vec<(usize, String, String)> = Vec::new();
        let mut blocks: Vec<(String, Vec<f64>)> = Vec::new();
        let mut current: Option<(usize, String, usize, Vec<f64>)> = None;
        let close = |cur: Option<(usize, String, usize, Vec<f64>)>,
                     blocks: &mut Vec<(String, Vec<f64>)>|
         -> Result<()> {
            if let Some((n, name, want, values)) = cur {
                if values.len() != want {
                    return Err(Error::parse(
                        n,
                        format!("[{name}] declares {want} values, found {}", values.len()),
                    ));
                }
                blocks.push((name, values));
            }
            Ok(())
        };
        for (n, line) in lines {
            if let Some(rest) = line.strip_prefix('[') {
                close(current.take(), &mut blocks)?;
                let (name, count) = rest
                    .split_once(']')
                    .ok_or_else(|| Error::parse(n, "unterminated section name"))?;
                let count = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(n, "section count must be an integer"))?;
                current = Some((n, name.trim().to_string(), count, Vec::new()));
            } else if let Some((_, _, _, values)) = current.as_mut() {
                let v = line
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(n, format!("bad parameter value {line:?}")))?;
                values.push(v);
            } else {
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::parse(n, "expected key = value"))?;
                header.push((n, k.trim().to_string(), v.trim().to_string()));
            }
        }
        close(current, &mut blocks)?;

        let get = |key: &str| -> Result<&str> {
            header
                .iter()
                .find(|(_, k, _)| k == key)
                .map(|(_, _, v)| v.as_str())
                .ok_or_else(|| Error::parse(1, format!("missing header key {key:?}")))
        };
        let get_num = |key: &str| -> Result<u64> {
            let v = get(key)?;
            v.parse()
                .map_err(|_| Error::parse(1, format!("{key} must be an integer, got {v:?}")))
        };
        let block = |name: &str| -> Result<&[f64]> {
            blocks
                .iter()
                .find(|(b, _)| b == name)
                .map(|(_, v)| v.as_slice())
                .ok_or_else(|| Error::parse(1, format!("missing [{name}] section")))
        };
        let shape = |e: Error| Error::parse(1, e.to_string());

        let num_features = get_num("num_features")? as usize;
        let frozen = block("frozen")?;
        let trainable = block("trainable")?;
        let model_name = get("model")?;
        let model = if model_name.eq_ignore_ascii_case("MLP") {
            let widths = Topology::parse_widths(get("layers")?).map_err(shape)?;
            if widths[0] != num_features {
                return Err(Error::parse(1, "MLP input width disagrees with num_features"));
            }
            if !frozen.is_empty() {
                return Err(Error::parse(1, "MLP files have no frozen values"));
            }
            TrainedModel::Mlp(MlpModel::from_flat(&widths, trainable).map_err(shape)?)
        } else {
            let kind: ModelKind = model_name.parse().map_err(shape)?;
            let model = match kind {
                ModelKind::Cffqnn | ModelKind::FixedCffqnn => {
                    let widths = Topology::parse_widths(get("layers")?).map_err(shape)?;
                    let topology = Topology::new(widths, num_features).map_err(shape)?;
                    let fixed = kind == ModelKind::FixedCffqnn;
                    let params = if fixed {
                        ParameterSet::from_blocks(&topology, frozen, trainable)
                    } else {
                        if !frozen.is_empty() {
                            return Err(Error::parse(1, "CFFQNN files have no frozen values"));
                        }
                        ParameterSet::from_flat(&topology, trainable)
                    }
                    .map_err(shape)?;
                    QuantumModel::Cffqnn {
                        topology,
                        params,
                        fixed,
                    }
                }
                ModelKind::QnnBaseline { .. } => {
                    let feature_map_reps = get_num("feature_map_reps")? as usize;
                    let ansatz_reps = get_num("ansatz_reps")? as usize;
                    let want = crate::models::qnn_theta_count(num_features, ansatz_reps);
                    if num_features == 0 || num_features > crate::qsim::MAX_QUBITS {
                        return Err(Error::parse(1, "num_features out of range"));
                    }
                    if trainable.len() != want || !frozen.is_empty() {
                        return Err(Error::parse(
                            1,
                            format!("QNN needs {want} trainable values and none frozen"),
                        ));
                    }
                    QuantumModel::Qnn {
                        num_features,
                        feature_map_reps,
                        ansatz_reps,
                        thetas: trainable.to_vec(),
                    }
                }
            };
            TrainedModel::Quantum(model)
        };
        Ok(Self {
            model,
            seed: get_num("seed")?,
            pca_k: get_num("pca_k")? as usize,
            pca_digest: get("pca_digest")?.to_string(),
            scale_digest: get("scale_digest")?.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::initial_model;

    fn wrap(model: TrainedModel) -> ParamsFile {
        ParamsFile {
            model,
            seed: 42,
            pca_k: 7,
            pca_digest: "aa".into(),
            scale_digest: "bb".into(),
        }
    }

    #[test]
    fn quantum_round_trips() {
        let t = Topology::new(vec![3, 2, 1], 7).unwrap();
        for kind in [ModelKind::Cffqnn, ModelKind::FixedCffqnn, ModelKind::qnn_default()] {
            let p = wrap(TrainedModel::Quantum(initial_model(&kind, &t, 42)));
            let text = p.to_text();
            assert_eq!(ParamsFile::parse(&text).unwrap(), p, "{kind}");
        }
    }

    #[test]
    fn fixed_layout() {
        let t = Topology::new(vec![3, 2, 1], 7).unwrap();
        let p = wrap(TrainedModel::Quantum(initial_model(&ModelKind::FixedCffqnn, &t, 1)));
        let text = p.to_text();
        assert!(text.contains("model = FIXED_CFFQNN\nlayers = 3,2,1\n"));
        assert!(text.contains("[frozen] 24\n"));
        assert!(text.contains("[trainable] 11\n"));
    }

    #[test]
    fn mlp_round_trips() {
        let p = wrap(TrainedModel::Mlp(MlpModel::seeded(&[7, 3, 2, 1], 3).unwrap()));
        let text = p.to_text();
        assert!(text.contains("layers = 7,3,2,1"));
        assert_eq!(ParamsFile::parse(&text).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        let t = Topology::new(vec![2, 1], 2).unwrap();
        let good = wrap(TrainedModel::Quantum(initial_model(&ModelKind::Cffqnn, &t, 1))).to_text();
        assert!(ParamsFile::parse("").is_err());
        assert!(ParamsFile::parse(&good.replace(MAGIC, "#nope")).is_err());
        assert!(ParamsFile::parse(&good.replace("[trainable] 9", "[trainable] 10")).is_err());
        assert!(ParamsFile::parse(&good.replace("model = CFFQNN", "model = BOGUS")).is_err());
        assert!(ParamsFile::parse(&good.replace("seed = 42\n", "")).is_err());
        assert!(ParamsFile::parse(&good.replace("layers = 2,1", "layers = 2,2")).is_err());
    }
}
