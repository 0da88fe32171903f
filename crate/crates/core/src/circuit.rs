//! Circuit IR, execution and resource accounting.
//!
//! Text format, one op per line after a `QUBITS n` header:
//!
//! ```text
//! QUBITS 2
//! H 0
//! CNOT 1 0
//! RY 1 7.8539816339744828e-1
//! ```
//!
//! Fields are `KIND target [control] [angle]`. Angles carry 17 significant
//! digits so a dump/parse cycle is lossless. Blank lines and `#` comments
//! are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{GateKind, GateOp, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > crate::qsim::MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        Ok(Self {
            num_qubits,
            ops: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Append all ops of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::Shape(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.num_qubits, self.num_qubits
            )));
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    /// Execute on a fresh `|0...0>` register.
    pub fn run(&self) -> Result<StateVector> {
        let mut state = StateVector::new_zero_state(self.num_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Shape(format!(
                "circuit has {} qubits, state has {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        for op in &self.ops {
            state.apply_gate(op)?;
        }
        Ok(())
    }

    /// Layer count under ASAP scheduling: an op lands one layer after the
    /// latest op touching any of its qubits.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for op in &self.ops {
            let l = 1 + op.qubits().map(|q| level[q]).max().unwrap_or(0);
            for q in op.qubits() {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Purely syntactic gate tally; angles never matter.
    pub fn count_resources(&self, trainable_parameters: usize) -> ResourceReport {
        let mut cnot = 0;
        let mut cry = 0;
        let mut single = 0;
        let mut pairs = HashSet::new();
        for op in &self.ops {
            match op.kind() {
                GateKind::Cnot => cnot += 1,
                GateKind::Cry => cry += 1,
                _ => single += 1,
            }
            if let Some(c) = op.control() {
                let t = op.target();
                pairs.insert((c.min(t), c.max(t)));
            }
        }
        ResourceReport {
            num_qubits: self.num_qubits,
            depth: self.depth(),
            native_controlled_ops: cnot + cry,
            cnot_count: cnot,
            cry_count: cry,
            cnot_equivalent: cnot + 2 * cry,
            coupled_pairs: pairs.len(),
            single_qubit_gates: single,
            trainable_parameters,
            wall_time_seconds: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.num_qubits);
        for op in &self.ops {
            out.push_str(op.kind().name());
            write!(out, " {}", op.target()).unwrap();
            if let Some(c) = op.control() {
                write!(out, " {c}").unwrap();
            }
            if let Some(a) = op.angle() {
                write!(out, " {a:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let Some(c) = circuit.as_mut() else {
                if fields.len() != 2 || fields[0] != "QUBITS" {
                    return Err(Error::parse(line_no, "expected `QUBITS n` header"));
                }
                let n = parse_index(fields[1], line_no)?;
                circuit = Some(Circuit::new(n).map_err(|e| Error::parse(line_no, e.to_string()))?);
                continue;
            };
            let kind = GateKind::from_name(fields[0])
                .ok_or_else(|| Error::parse(line_no, format!("unknown gate {:?}", fields[0])))?;
            let expected = 2 + kind.is_controlled() as usize + kind.has_angle() as usize;
            if fields.len() != expected {
                return Err(Error::parse(
                    line_no,
                    format!("{kind} takes {} fields, got {}", expected, fields.len()),
                ));
            }
            let target = parse_index(fields[1], line_no)?;
            let control = if kind.is_controlled() {
                Some(parse_index(fields[2], line_no)?)
            } else {
                None
            };
            let angle = if kind.has_angle() {
                let s = fields[expected - 1];
                let a: f64 = s
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad angle {s:?}")))?;
                if !a.is_finite() {
                    return Err(Error::parse(line_no, "angle must be finite"));
                }
                Some(a)
            } else {
                None
            };
            let op = GateOp::from_parts(kind, target, control, angle)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
            c.push(op).map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        circuit.ok_or_else(|| Error::parse(0, "missing `QUBITS n` header"))
    }
}

fn parse_index(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("bad qubit index {s:?}")))
}

/// Gate and timing tally for one model.
///
/// `cnot_equivalent` prices each CRY at two CNOTs (its usual decomposition).
/// `coupled_pairs` is the number of distinct unordered qubit pairs joined by
/// at least one controlled op.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub num_qubits: usize,
    pub depth: usize,
    pub native_controlled_ops: usize,
    pub cnot_count: usize,
    pub cry_count: usize,
    pub cnot_equivalent: usize,
    pub coupled_pairs: usize,
    pub single_qubit_gates: usize,
    pub trainable_parameters: usize,
    pub wall_time_seconds: Option<f64>,
}
