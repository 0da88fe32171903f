//! Circuit builders for the coherent feed-forward network, its frozen-encoder
//! variant and the feature-map + ansatz baseline, plus readout.
//!
//! CFFQNN qubits are laid out layer by layer: the first-layer qubits come
//! first, the single output qubit is the highest index.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::qsim::{GateOp, MAX_QUBITS};

/// Layer widths of a CFFQNN plus the classical input dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    layer_widths: Vec<usize>,
    num_features: usize,
}

impl Topology {
    pub fn new(layer_widths: Vec<usize>, num_features: usize) -> Result<Self> {
        if layer_widths.len() < 2 {
            return Err(Error::InvalidArgument(
                "topology needs at least two layers".into(),
            ));
        }
        if layer_widths.contains(&0) {
            return Err(Error::InvalidArgument("layer width 0".into()));
        }
        if *layer_widths.last().unwrap() != 1 {
            return Err(Error::InvalidArgument(
                "last layer must have width 1".into(),
            ));
        }
        if num_features == 0 {
            return Err(Error::InvalidArgument("num_features must be >= 1".into()));
        }
        let total: usize = layer_widths.iter().sum();
        if total > MAX_QUBITS {
            return Err(Error::QubitCount(total));
        }
        Ok(Self {
            layer_widths,
            num_features,
        })
    }

    pub fn layer_widths(&self) -> &[usize] {
        &self.layer_widths
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn total_qubits(&self) -> usize {
        self.layer_widths.iter().sum()
    }

    pub fn first_layer_width(&self) -> usize {
        self.layer_widths[0]
    }

    /// Index of the first qubit in each layer.
    pub fn layer_offsets(&self) -> Vec<usize> {
        self.layer_widths
            .iter()
            .scan(0, |acc, &w| {
                let start = *acc;
                *acc += w;
                Some(start)
            })
            .collect()
    }

    pub fn output_qubit(&self) -> usize {
        self.total_qubits() - 1
    }

    /// Parse `3,2,1` (also accepts `3-2-1`).
    pub fn parse_widths(s: &str) -> Result<Vec<usize>> {
        s.split([',', '-'])
            .map(|w| {
                w.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad layer width {w:?}")))
            })
            .collect()
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_widths(&self.layer_widths))
    }
}

pub(crate) fn join_widths(widths: &[usize]) -> String {
    widths
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// All angles of a CFFQNN.
///
/// `encoding_weights[q]` is `[b_q, W_q1, ..., W_qN]` for first-layer qubit
/// `q`. `hidden_thetas[l][j]` is `[theta_0j, theta_1j, ...]` for qubit `j` of
/// layer `l + 1`, with column 0 the bias rotation and column `i + 1` the
/// controlled rotation from qubit `i` of layer `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub encoding_weights: Vec<Vec<f64>>,
    pub hidden_thetas: Vec<Vec<Vec<f64>>>,
}

impl ParameterSet {
    pub fn zeros(topology: &Topology) -> Self {
        let w = topology.layer_widths();
        Self {
            encoding_weights: vec![vec![0.0; topology.num_features() + 1]; w[0]],
            hidden_thetas: w
                .windows(2)
                .map(|pair| vec![vec![0.0; pair[0] + 1]; pair[1]])
                .collect(),
        }
    }

    pub fn check_shape(&self, topology: &Topology) -> Result<()> {
        let expect = Self::zeros(topology);
        let same = |a: &[Vec<f64>], b: &[Vec<f64>]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.len() == y.len())
        };
        let ok = same(&self.encoding_weights, &expect.encoding_weights)
            && self.hidden_thetas.len() == expect.hidden_thetas.len()
            && self
                .hidden_thetas
                .iter()
                .zip(&expect.hidden_thetas)
                .all(|(a, b)| same(a, b));
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "parameters do not fit topology {topology}"
            )))
        }
    }

    pub fn encoding_len(topology: &Topology) -> usize {
        topology.first_layer_width() * (topology.num_features() + 1)
    }

    pub fn hidden_len(topology: &Topology) -> usize {
        topology
            .layer_widths()
            .windows(2)
            .map(|p| p[1] * (p[0] + 1))
            .sum()
    }

    /// Row-major encoding block.
    pub fn encoding_flat(&self) -> Vec<f64> {
        self.encoding_weights.iter().flatten().copied().collect()
    }

    /// Row-major hidden blocks, layer pair by layer pair.
    pub fn hidden_flat(&self) -> Vec<f64> {
        self.hidden_thetas.iter().flatten().flatten().copied().collect()
    }

    /// Encoding block followed by hidden blocks.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.encoding_flat();
        v.extend(self.hidden_flat());
        v
    }

    pub fn from_flat(topology: &Topology, flat: &[f64]) -> Result<Self> {
        let enc = Self::encoding_len(topology);
        let total = enc + Self::hidden_len(topology);
        if flat.len() != total {
            return Err(Error::Shape(format!(
                "topology {topology} needs {total} parameters, got {}",
                flat.len()
            )));
        }
        Self::from_blocks(topology, &flat[..enc], &flat[enc..])
    }

    pub fn from_blocks(topology: &Topology, encoding: &[f64], hidden: &[f64]) -> Result<Self> {
        let mut p = Self::zeros(topology);
        if encoding.len() != Self::encoding_len(topology) {
            return Err(Error::Shape(format!(
                "encoding block needs {} values, got {}",
                Self::encoding_len(topology),
                encoding.len()
            )));
        }
        if hidden.len() != Self::hidden_len(topology) {
            return Err(Error::Shape(format!(
                "hidden block needs {} values, got {}",
                Self::hidden_len(topology),
                hidden.len()
            )));
        }
        let mut it = encoding.iter();
        for v in p.encoding_weights.iter_mut().flatten() {
            *v = *it.next().unwrap();
        }
        let mut it = hidden.iter();
        for v in p.hidden_thetas.iter_mut().flatten().flatten() {
            *v = *it.next().unwrap();
        }
        Ok(p)
    }
}

/// Which model family a parameter vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Cffqnn,
    FixedCffqnn,
    QnnBaseline {
        feature_map_reps: usize,
        ansatz_reps: usize,
    },
}

impl ModelKind {
    pub fn qnn_default() -> Self {
        ModelKind::QnnBaseline {
            feature_map_reps: 2,
            ansatz_reps: 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Cffqnn => "CFFQNN",
            ModelKind::FixedCffqnn => "FIXED_CFFQNN",
            ModelKind::QnnBaseline { .. } => "QNN",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    /// Reads the family name only; baseline reps take their defaults.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "CFFQNN" => Ok(ModelKind::Cffqnn),
            "FIXED_CFFQNN" | "FIXEDCFFQNN" => Ok(ModelKind::FixedCffqnn),
            "QNN" | "QNN_BASELINE" => Ok(ModelKind::qnn_default()),
            other => Err(Error::InvalidArgument(format!("unknown model {other:?}"))),
        }
    }
}

/// Number of angles the optimizer gets to move.
pub fn trainable_parameter_count(kind: &ModelKind, topology: &Topology) -> usize {
    match *kind {
        ModelKind::Cffqnn => ParameterSet::encoding_len(topology) + ParameterSet::hidden_len(topology),
        ModelKind::FixedCffqnn => ParameterSet::hidden_len(topology),
        ModelKind::QnnBaseline { ansatz_reps, .. } => {
            qnn_theta_count(topology.num_features(), ansatz_reps)
        }
    }
}

pub fn qnn_theta_count(num_qubits: usize, ansatz_reps: usize) -> usize {
    num_qubits * (ansatz_reps + 1)
}

/// Smallest ansatz repetition count whose parameter count reaches `target`.
pub fn ansatz_reps_for_at_least(num_qubits: usize, target: usize) -> usize {
    let mut reps = 1;
    while qnn_theta_count(num_qubits, reps) < target {
        reps += 1;
    }
    reps
}

/// Encoding angle of each first-layer qubit: `b_q + sum_i W_qi x_i`.
pub fn encoding_angles(params: &ParameterSet, features: &[f64]) -> Vec<f64> {
    params
        .encoding_weights
        .iter()
        .map(|row| {
            row[1..]
                .iter()
                .zip(features)
                .fold(row[0], |z, (w, x)| z + w * x)
        })
        .collect()
}

pub fn build_cffqnn_circuit(
    topology: &Topology,
    params: &ParameterSet,
    features: &[f64],
) -> Result<Circuit> {
    if features.len() != topology.num_features() {
        return Err(Error::Shape(format!(
            "expected {} features, got {}",
            topology.num_features(),
            features.len()
        )));
    }
    params.check_shape(topology)?;
    let mut circuit = Circuit::new(topology.total_qubits())?;
    // all encoding rotations on a qubit share an axis, so they collapse to one RY
    for (q, z) in encoding_angles(params, features).into_iter().enumerate() {
        circuit.push(GateOp::Ry { target: q, angle: z })?;
    }
    let offsets = topology.layer_offsets();
    for (l, thetas) in params.hidden_thetas.iter().enumerate() {
        let (prev, next) = (offsets[l], offsets[l + 1]);
        for (j, row) in thetas.iter().enumerate() {
            let target = next + j;
            circuit.push(GateOp::Ry {
                target,
                angle: row[0],
            })?;
            for (i, &angle) in row[1..].iter().enumerate() {
                circuit.push(GateOp::Cry {
                    control: prev + i,
                    target,
                    angle,
                })?;
            }
        }
    }
    Ok(circuit)
}

/// Second-order Pauli-Z feature map with full entanglement.
pub fn zz_feature_map(features: &[f64], reps: usize) -> Result<Circuit> {
    let n = features.len();
    let mut c = Circuit::new(n)?;
    for _ in 0..reps {
        for q in 0..n {
            c.push(GateOp::H { target: q })?;
        }
        for (q, x) in features.iter().enumerate() {
            c.push(GateOp::Phase {
                target: q,
                angle: 2.0 * x,
            })?;
        }
        for i in 0..n {
            for j in i + 1..n {
                let angle = 2.0 * (PI - features[i]) * (PI - features[j]);
                c.push(GateOp::Cnot {
                    control: i,
                    target: j,
                })?;
                c.push(GateOp::Phase { target: j, angle })?;
                c.push(GateOp::Cnot {
                    control: i,
                    target: j,
                })?;
            }
        }
    }
    Ok(c)
}

/// RY layers separated by linear CNOT chains, ending on an RY layer.
pub fn real_amplitudes(num_qubits: usize, reps: usize, thetas: &[f64]) -> Result<Circuit> {
    let need = qnn_theta_count(num_qubits, reps);
    if thetas.len() != need {
        return Err(Error::Shape(format!(
            "ansatz needs {need} angles, got {}",
            thetas.len()
        )));
    }
    let mut c = Circuit::new(num_qubits)?;
    let mut layers = thetas.chunks(num_qubits);
    for rep in 0..=reps {
        for (q, &angle) in layers.next().unwrap().iter().enumerate() {
            c.push(GateOp::Ry { target: q, angle })?;
        }
        if rep < reps {
            for q in 0..num_qubits - 1 {
                c.push(GateOp::Cnot {
                    control: q,
                    target: q + 1,
                })?;
            }
        }
    }
    Ok(c)
}

pub fn build_qnn_circuit(
    num_features: usize,
    feature_map_reps: usize,
    ansatz_reps: usize,
    thetas: &[f64],
    features: &[f64],
) -> Result<Circuit> {
    if features.len() != num_features {
        return Err(Error::Shape(format!(
            "expected {num_features} features, got {}",
            features.len()
        )));
    }
    if feature_map_reps == 0 || ansatz_reps == 0 {
        return Err(Error::InvalidArgument("baseline reps must be >= 1".into()));
    }
    let mut c = zz_feature_map(features, feature_map_reps)?;
    c.append(&real_amplitudes(num_features, ansatz_reps, thetas)?)?;
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub expectation: f64,
    pub class: u8,
}

impl Prediction {
    /// Threshold at zero; an exact zero counts as class 0.
    pub fn from_expectation(expectation: f64) -> Self {
        Self {
            expectation,
            class: u8::from(expectation < 0.0),
        }
    }
}

/// A fully specified quantum classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumModel {
    Cffqnn {
        topology: Topology,
        params: ParameterSet,
        /// First-layer weights are frozen and the readout is the Z parity of
        /// every qubit past the first layer.
        fixed: bool,
    },
    Qnn {
        num_features: usize,
        feature_map_reps: usize,
        ansatz_reps: usize,
        thetas: Vec<f64>,
    },
}

impl QuantumModel {
    /// Model with seeded initial angles. Trainable angles come from
    /// `U[-0.1, 0.1]`; frozen encoding weights (fixed variant) from `U[-1, 1]`
    /// drawn with `frozen_rng`.
    pub fn init(
        kind: &ModelKind,
        topology: &Topology,
        rng: &mut impl Rng,
        frozen_rng: &mut impl Rng,
    ) -> Self {
        let small = |n: usize, rng: &mut dyn rand::RngCore| -> Vec<f64> {
            (0..n).map(|_| rng.gen_range(-0.1..=0.1)).collect()
        };
        match *kind {
            ModelKind::Cffqnn => {
                let flat = small(trainable_parameter_count(kind, topology), rng);
                QuantumModel::Cffqnn {
                    topology: topology.clone(),
                    params: ParameterSet::from_flat(topology, &flat).unwrap(),
                    fixed: false,
                }
            }
            ModelKind::FixedCffqnn => {
                let enc: Vec<f64> = (0..ParameterSet::encoding_len(topology))
                    .map(|_| frozen_rng.gen_range(-1.0..=1.0))
                    .collect();
                let hidden = small(ParameterSet::hidden_len(topology), rng);
                QuantumModel::Cffqnn {
                    topology: topology.clone(),
                    params: ParameterSet::from_blocks(topology, &enc, &hidden).unwrap(),
                    fixed: true,
                }
            }
            ModelKind::QnnBaseline {
                feature_map_reps,
                ansatz_reps,
            } => QuantumModel::Qnn {
                num_features: topology.num_features(),
                feature_map_reps,
                ansatz_reps,
                thetas: small(qnn_theta_count(topology.num_features(), ansatz_reps), rng),
            },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match *self {
            QuantumModel::Cffqnn { fixed: false, .. } => ModelKind::Cffqnn,
            QuantumModel::Cffqnn { fixed: true, .. } => ModelKind::FixedCffqnn,
            QuantumModel::Qnn {
                feature_map_reps,
                ansatz_reps,
                ..
            } => ModelKind::QnnBaseline {
                feature_map_reps,
                ansatz_reps,
            },
        }
    }

    pub fn num_features(&self) -> usize {
        match self {
            QuantumModel::Cffqnn { topology, .. } => topology.num_features(),
            QuantumModel::Qnn { num_features, .. } => *num_features,
        }
    }

    pub fn circuit(&self, features: &[f64]) -> Result<Circuit> {
        match self {
            QuantumModel::Cffqnn {
                topology, params, ..
            } => build_cffqnn_circuit(topology, params, features),
            QuantumModel::Qnn {
                num_features,
                feature_map_reps,
                ansatz_reps,
                thetas,
            } => build_qnn_circuit(*num_features, *feature_map_reps, *ansatz_reps, thetas, features),
        }
    }

    /// Qubits whose Z product is the model output.
    pub fn readout_qubits(&self) -> Vec<usize> {
        match self {
            QuantumModel::Cffqnn {
                topology,
                fixed: true,
                ..
            } => (topology.first_layer_width()..topology.total_qubits()).collect(),
            QuantumModel::Cffqnn { topology, .. } => vec![topology.output_qubit()],
            QuantumModel::Qnn { num_features, .. } => vec![num_features - 1],
        }
    }

    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let state = self.circuit(features)?.run()?;
        let e = state.expectation_z_product(&self.readout_qubits())?;
        Ok(Prediction::from_expectation(e))
    }

    pub fn trainable(&self) -> Vec<f64> {
        match self {
            QuantumModel::Cffqnn {
                params,
                fixed: false,
                ..
            } => params.to_flat(),
            QuantumModel::Cffqnn { params, .. } => params.hidden_flat(),
            QuantumModel::Qnn { thetas, .. } => thetas.clone(),
        }
    }

    /// Angles held constant during training (the fixed variant's encoder).
    pub fn frozen(&self) -> Vec<f64> {
        match self {
            QuantumModel::Cffqnn {
                params,
                fixed: true,
                ..
            } => params.encoding_flat(),
            _ => Vec::new(),
        }
    }

    pub fn with_trainable(&self, values: &[f64]) -> Result<Self> {
        let mut m = self.clone();
        match &mut m {
            QuantumModel::Cffqnn {
                topology,
                params,
                fixed,
            } => {
                *params = if *fixed {
                    ParameterSet::from_blocks(topology, &params.encoding_flat(), values)?
                } else {
                    ParameterSet::from_flat(topology, values)?
                };
            }
            QuantumModel::Qnn { thetas, .. } => {
                if values.len() != thetas.len() {
                    return Err(Error::Shape(format!(
                        "expected {} angles, got {}",
                        thetas.len(),
                        values.len()
                    )));
                }
                thetas.copy_from_slice(values);
            }
        }
        Ok(m)
    }

    /// Representative circuit for resource accounting (all inputs zero).
    pub fn resource_circuit(&self) -> Result<Circuit> {
        self.circuit(&vec![0.0; self.num_features()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::GateKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn topo(w: &[usize], n: usize) -> Topology {
        Topology::new(w.to_vec(), n).unwrap()
    }

    fn count(c: &Circuit, kind: GateKind) -> usize {
        c.ops().iter().filter(|op| op.kind() == kind).count()
    }

    #[test]
    fn topology_validation() {
        assert!(Topology::new(vec![3], 7).is_err());
        assert!(Topology::new(vec![3, 0, 1], 7).is_err());
        assert!(Topology::new(vec![3, 2], 7).is_err());
        assert!(Topology::new(vec![3, 2, 1], 0).is_err());
        assert!(Topology::new(vec![8, 5, 1], 7).is_err());
        let t = topo(&[3, 2, 1], 7);
        assert_eq!(t.total_qubits(), 6);
        assert_eq!(t.layer_offsets(), vec![0, 3, 5]);
        assert_eq!(t.to_string(), "3,2,1");
        assert_eq!(Topology::parse_widths("3-2-1").unwrap(), vec![3, 2, 1]);
    }

    #[test]
    fn trivial_one_one_circuit() {
        let t = topo(&[1, 1], 1);
        let p = ParameterSet::zeros(&t);
        let c = build_cffqnn_circuit(&t, &p, &[0.3]).unwrap();
        assert_eq!(
            c.ops(),
            &[
                GateOp::Ry {
                    target: 0,
                    angle: 0.0
                },
                GateOp::Ry {
                    target: 1,
                    angle: 0.0
                },
                GateOp::Cry {
                    control: 0,
                    target: 1,
                    angle: 0.0
                },
            ]
        );
        let s = c.run().unwrap();
        assert_eq!(s.amplitudes()[0].re, 1.0);
        assert_eq!(s.expectation_z(1).unwrap(), 1.0);
    }

    #[test]
    fn three_two_one_gate_counts() {
        let t = topo(&[3, 2, 1], 7);
        let c = build_cffqnn_circuit(&t, &ParameterSet::zeros(&t), &[0.5; 7]).unwrap();
        assert_eq!(count(&c, GateKind::Ry), 3 + 3);
        assert_eq!(count(&c, GateKind::Cry), 8);
        assert_eq!(c.num_qubits(), 6);
    }

    #[test]
    fn single_node_output_is_cosine() {
        let t = topo(&[1, 1], 1);
        let (w, b, x) = (0.7, -0.2, 1.9);
        let mut p = ParameterSet::zeros(&t);
        p.encoding_weights[0] = vec![b, w];
        let s = build_cffqnn_circuit(&t, &p, &[x]).unwrap().run().unwrap();
        assert!((s.expectation_z(0).unwrap() - (w * x + b).cos()).abs() < 1e-14);
    }

    #[test]
    fn half_probability_control_gives_zero_output() {
        let t = topo(&[1, 1], 1);
        let mut p = ParameterSet::zeros(&t);
        p.encoding_weights[0] = vec![FRAC_PI_2, 0.0];
        p.hidden_thetas[0][0] = vec![0.0, std::f64::consts::PI];
        let m = QuantumModel::Cffqnn {
            topology: t,
            params: p,
            fixed: false,
        };
        let pred = m.predict(&[0.4]).unwrap();
        assert!(pred.expectation.abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let t = topo(&[2, 1], 3);
        let p = ParameterSet::zeros(&t);
        assert!(build_cffqnn_circuit(&t, &p, &[0.0; 2]).is_err());
        let other = ParameterSet::zeros(&topo(&[3, 1], 3));
        assert!(build_cffqnn_circuit(&t, &other, &[0.0; 3]).is_err());
        assert!(ParameterSet::from_flat(&t, &[0.0; 3]).is_err());
        assert!(build_qnn_circuit(3, 1, 1, &[0.0; 5], &[0.0; 3]).is_err());
        assert!(build_qnn_circuit(3, 1, 1, &[0.0; 6], &[0.0; 2]).is_err());
    }

    #[test]
    fn flat_round_trip_is_ordered() {
        let t = topo(&[2, 2, 1], 2);
        let flat: Vec<f64> = (0..ParameterSet::encoding_len(&t) + ParameterSet::hidden_len(&t))
            .map(|i| i as f64)
            .collect();
        let p = ParameterSet::from_flat(&t, &flat).unwrap();
        assert_eq!(p.encoding_weights[1], vec![3.0, 4.0, 5.0]);
        assert_eq!(p.hidden_thetas[0][0], vec![6.0, 7.0, 8.0]);
        assert_eq!(p.hidden_thetas[1][0], vec![12.0, 13.0, 14.0]);
        assert_eq!(p.to_flat(), flat);
    }

    #[test]
    fn zz_map_structure() {
        let c = zz_feature_map(&[0.1, 0.2, 0.3], 1).unwrap();
        assert_eq!(count(&c, GateKind::Cnot), 6);
        assert_eq!(c.count_resources(0).coupled_pairs, 3);
        // x_i = x_j = pi gives a zero entangling phase
        let c = zz_feature_map(&[PI, PI], 1).unwrap();
        let GateOp::Phase { angle, .. } = c.ops()[5] else {
            panic!("expected phase, got {:?}", c.ops()[5]);
        };
        assert_eq!(angle, 0.0);
    }

    #[test]
    fn real_amplitudes_structure() {
        let c = real_amplitudes(7, 2, &[0.0; 21]).unwrap();
        assert_eq!(count(&c, GateKind::Cnot), 12);
        assert_eq!(count(&c, GateKind::Ry), 21);
        assert_eq!(c.ops().last().unwrap().kind(), GateKind::Ry);
    }

    #[test]
    fn parameter_counts() {
        let t = topo(&[3, 2, 1], 7);
        assert_eq!(trainable_parameter_count(&ModelKind::Cffqnn, &t), 35);
        assert_eq!(trainable_parameter_count(&ModelKind::FixedCffqnn, &t), 11);
        assert_eq!(trainable_parameter_count(&ModelKind::qnn_default(), &t), 21);
        assert_eq!(ansatz_reps_for_at_least(7, 35), 4);
    }

    #[test]
    fn thresholding() {
        assert_eq!(Prediction::from_expectation(1.0).class, 0);
        assert_eq!(Prediction::from_expectation(-1.0).class, 1);
        assert_eq!(Prediction::from_expectation(0.0).class, 0);
    }

    #[test]
    fn zero_parameter_model_predicts_class_zero() {
        let t = topo(&[3, 2, 1], 7);
        let m = QuantumModel::Cffqnn {
            topology: t.clone(),
            params: ParameterSet::zeros(&t),
            fixed: false,
        };
        let p = m.predict(&[1.0, 2.0, 0.5, 3.0, 0.1, 2.2, 1.7]).unwrap();
        assert!((p.expectation - 1.0).abs() < 1e-15);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn fixed_variant_trains_hidden_only() {
        let t = topo(&[3, 2, 1], 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut frozen = ChaCha8Rng::seed_from_u64(2);
        let m = QuantumModel::init(&ModelKind::FixedCffqnn, &t, &mut rng, &mut frozen);
        assert_eq!(m.trainable().len(), 11);
        assert_eq!(m.frozen().len(), 24);
        assert!(m.frozen().iter().all(|w| w.abs() <= 1.0));
        assert!(m.trainable().iter().all(|w| w.abs() <= 0.1));
        let moved = m.with_trainable(&[0.5; 11]).unwrap();
        assert_eq!(moved.frozen(), m.frozen());
        assert_eq!(moved.readout_qubits(), vec![3, 4, 5]);
        assert_eq!(moved.kind(), ModelKind::FixedCffqnn);
    }

    #[test]
    fn model_kind_names() {
        assert_eq!("cffqnn".parse::<ModelKind>().unwrap(), ModelKind::Cffqnn);
        assert_eq!(
            "fixed-cffqnn".parse::<ModelKind>().unwrap(),
            ModelKind::FixedCffqnn
        );
        assert_eq!("QNN".parse::<ModelKind>().unwrap(), ModelKind::qnn_default());
        assert!("mlp".parse::<ModelKind>().is_err());
    }
}
