//! Exact statevector simulation for the five gates the models need.
//!
//! Qubit `k` is bit `k` of the basis-state index (little-endian), so the
//! amplitude of `|q2 q1 q0>` lives at index `q0 + 2*q1 + 4*q2`. Gates are
//! applied in place by striding over the target bit; no matrix is ever
//! materialized.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 12;

/// Gate kinds understood by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Ry,
    Cry,
    H,
    Phase,
    Cnot,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Ry => "RY",
            GateKind::Cry => "CRY",
            GateKind::H => "H",
            GateKind::Phase => "PHASE",
            GateKind::Cnot => "CNOT",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "RY" => GateKind::Ry,
            "CRY" => GateKind::Cry,
            "H" => GateKind::H,
            "PHASE" => GateKind::Phase,
            "CNOT" => GateKind::Cnot,
            _ => return None,
        })
    }

    pub fn is_controlled(self) -> bool {
        matches!(self, GateKind::Cry | GateKind::Cnot)
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::Ry | GateKind::Cry | GateKind::Phase)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    Ry { target: usize, angle: f64 },
    Cry { control: usize, target: usize, angle: f64 },
    H { target: usize },
    Phase { target: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    /// Assemble an op from loosely typed parts, as read from text.
    pub fn from_parts(
        kind: GateKind,
        target: usize,
        control: Option<usize>,
        angle: Option<f64>,
    ) -> Result<Self> {
        let need_control = || {
            control.ok_or(Error::MalformedGate {
                kind: kind.name(),
                what: "control",
            })
        };
        let need_angle = || {
            angle.ok_or(Error::MalformedGate {
                kind: kind.name(),
                what: "angle",
            })
        };
        let op = match kind {
            GateKind::Ry => GateOp::Ry {
                target,
                angle: need_angle()?,
            },
            GateKind::Cry => GateOp::Cry {
                control: need_control()?,
                target,
                angle: need_angle()?,
            },
            GateKind::H => GateOp::H { target },
            GateKind::Phase => GateOp::Phase {
                target,
                angle: need_angle()?,
            },
            GateKind::Cnot => GateOp::Cnot {
                control: need_control()?,
                target,
            },
        };
        if let Some(c) = op.control() {
            if c == target {
                return Err(Error::ControlIsTarget(c));
            }
        }
        Ok(op)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::Ry { .. } => GateKind::Ry,
            GateOp::Cry { .. } => GateKind::Cry,
            GateOp::H { .. } => GateKind::H,
            GateOp::Phase { .. } => GateKind::Phase,
            GateOp::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            GateOp::Ry { target, .. }
            | GateOp::Cry { target, .. }
            | GateOp::H { target }
            | GateOp::Phase { target, .. }
            | GateOp::Cnot { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            GateOp::Cry { control, .. } | GateOp::Cnot { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::Ry { angle, .. } | GateOp::Cry { angle, .. } | GateOp::Phase { angle, .. } => {
                Some(angle)
            }
            _ => None,
        }
    }

    /// Target plus control, if any.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.target()).chain(self.control())
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitIndex {
                    index: q,
                    num_qubits,
                });
            }
        }
        if self.control() == Some(self.target()) {
            return Err(Error::ControlIsTarget(self.target()));
        }
        Ok(())
    }
}

/// Complex amplitudes over `2^num_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn new_zero_state(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wrap an explicit amplitude vector. The length must be a power of two
    /// and the vector must be normalized to within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Shape(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        match *op {
            GateOp::Ry { target, angle } => self.ry(target, None, angle),
            GateOp::Cry {
                control,
                target,
                angle,
            } => self.ry(target, Some(control), angle),
            GateOp::H { target } => self.hadamard(target),
            GateOp::Phase { target, angle } => self.phase(target, angle),
            GateOp::Cnot { control, target } => self.cnot(control, target),
        }
        Ok(())
    }

    /// Visits every index pair `(i, i | 1<<target)` with the target bit of `i`
    /// clear, restricted to the branch where `control` is set.
    fn for_each_pair(
        &mut self,
        target: usize,
        control: Option<usize>,
        mut f: impl FnMut(&mut Complex64, &mut Complex64),
    ) {
        let stride = 1usize << target;
        let control_mask = control.map_or(0, |c| 1usize << c);
        let amps = &mut self.amplitudes;
        for block in (0..amps.len()).step_by(stride << 1) {
            for i in block..block + stride {
                if i & control_mask != control_mask {
                    continue;
                }
                let (lo, hi) = amps.split_at_mut(i + stride);
                f(&mut lo[i], &mut hi[0]);
            }
        }
    }

    fn ry(&mut self, target: usize, control: Option<usize>, angle: f64) {
        let (s, c) = (angle / 2.0).sin_cos();
        self.for_each_pair(target, control, |a0, a1| {
            let (x0, x1) = (*a0, *a1);
            *a0 = x0 * c - x1 * s;
            *a1 = x0 * s + x1 * c;
        });
    }

    fn hadamard(&mut self, target: usize) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.for_each_pair(target, None, |a0, a1| {
            let (x0, x1) = (*a0, *a1);
            *a0 = (x0 + x1) * r;
            *a1 = (x0 - x1) * r;
        });
    }

    fn phase(&mut self, target: usize, angle: f64) {
        let w = Complex64::from_polar(1.0, angle);
        self.for_each_pair(target, None, |_, a1| *a1 *= w);
    }

    fn cnot(&mut self, control: usize, target: usize) {
        self.for_each_pair(target, Some(control), std::mem::swap);
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn marginal_probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `<Z>` on a single qubit.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.expectation_z_product(&[qubit])
    }

    /// `<Z_a Z_b ...>` over a set of distinct qubits: the parity-weighted
    /// probability sum.
    pub fn expectation_z_product(&self, qubits: &[usize]) -> Result<f64> {
        if qubits.is_empty() {
            return Err(Error::InvalidArgument("empty qubit list".into()));
        }
        let mut mask = 0usize;
        for &q in qubits {
            self.check_qubit(q)?;
            if mask & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            mask |= 1 << q;
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if (i & mask).count_ones().is_multiple_of(2) {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn zero_state_shapes() {
        let s = StateVector::new_zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::new_zero_state(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
    }

    #[test]
    fn zero_state_range() {
        assert!(matches!(
            StateVector::new_zero_state(13),
            Err(Error::QubitCount(13))
        ));
        assert!(StateVector::new_zero_state(0).is_err());
        assert!(StateVector::new_zero_state(12).is_ok());
    }

    #[test]
    fn ry_pi_flips() {
        let mut s = StateVector::new_zero_state(1).unwrap();
        s.apply_gate(&GateOp::Ry {
            target: 0,
            angle: PI,
        })
        .unwrap();
        assert!(close(s.amplitudes()[0], c(0.0, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn ry_composes_additively() {
        let (a, b) = (0.37, -1.91);
        let mut s1 = StateVector::new_zero_state(2).unwrap();
        s1.apply_gate(&GateOp::Ry { target: 1, angle: a }).unwrap();
        s1.apply_gate(&GateOp::Ry { target: 1, angle: b }).unwrap();
        let mut s2 = StateVector::new_zero_state(2).unwrap();
        s2.apply_gate(&GateOp::Ry {
            target: 1,
            angle: a + b,
        })
        .unwrap();
        for (x, y) in s1.amplitudes().iter().zip(s2.amplitudes()) {
            assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn cry_with_control_off_is_identity_on_target() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::Cry {
            control: 0,
            target: 1,
            angle: 1.3,
        })
        .unwrap();
        assert_eq!(s, StateVector::new_zero_state(2).unwrap());
    }

    #[test]
    fn cry_with_control_on_rotates_target() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::Ry { target: 0, angle: PI }).unwrap();
        s.apply_gate(&GateOp::Cry {
            control: 0,
            target: 1,
            angle: PI,
        })
        .unwrap();
        // |q1 q0> = |11> is index 3
        assert!(close(s.amplitudes()[3], c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn hadamard_then_phase_matches_z_feature_block() {
        // H then P(2x) on |0> is (|0> + e^{2ix}|1>)/sqrt(2).
        let x = 0.81;
        let mut s = StateVector::new_zero_state(1).unwrap();
        s.apply_gate(&GateOp::H { target: 0 }).unwrap();
        s.apply_gate(&GateOp::Phase {
            target: 0,
            angle: 2.0 * x,
        })
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(s.amplitudes()[0], c(r, 0.0), 1e-15));
        assert!(close(
            s.amplitudes()[1],
            Complex64::from_polar(r, 2.0 * x),
            1e-15
        ));
    }

    #[test]
    fn cnot_flips_only_under_control() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        s.apply_gate(&GateOp::Ry { target: 0, angle: PI }).unwrap();
        s.apply_gate(&GateOp::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert!(close(s.amplitudes()[3], c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn gate_errors() {
        let mut s = StateVector::new_zero_state(2).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::H { target: 2 }),
            Err(Error::QubitIndex { index: 2, .. })
        ));
        assert!(matches!(
            s.apply_gate(&GateOp::Cnot {
                control: 1,
                target: 1
            }),
            Err(Error::ControlIsTarget(1))
        ));
        assert!(GateOp::from_parts(GateKind::Cry, 0, None, Some(1.0)).is_err());
        assert!(GateOp::from_parts(GateKind::Ry, 0, None, None).is_err());
    }

    #[test]
    fn z_expectation_values() {
        let s = StateVector::new_zero_state(1).unwrap();
        assert_eq!(s.expectation_z(0).unwrap(), 1.0);

        let mut h = StateVector::new_zero_state(1).unwrap();
        h.apply_gate(&GateOp::H { target: 0 }).unwrap();
        assert!(h.expectation_z(0).unwrap().abs() < 1e-12);

        for z in [-2.0, -0.3, 0.0, 0.9, 2.5, PI] {
            let mut s = StateVector::new_zero_state(1).unwrap();
            s.apply_gate(&GateOp::Ry { target: 0, angle: z }).unwrap();
            // p(0) - p(1) straight from the amplitudes
            let a = s.amplitudes();
            let direct = a[0].norm_sqr() - a[1].norm_sqr();
            let e = s.expectation_z(0).unwrap();
            assert!((e - direct).abs() < 1e-14);
            assert!((e - z.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_on_basis_states() {
        let s = StateVector::new_zero_state(2).unwrap();
        assert_eq!(s.expectation_z_product(&[0, 1]).unwrap(), 1.0);
        let mut s = StateVector::new_zero_state(2).unwrap();
        s.apply_gate(&GateOp::Ry { target: 0, angle: PI }).unwrap();
        assert!((s.expectation_z_product(&[0, 1]).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(
            s.expectation_z_product(&[1, 1]),
            Err(Error::DuplicateQubit(1))
        ));
        assert!(s.expectation_z_product(&[]).is_err());
        assert!(s.expectation_z_product(&[5]).is_err());
    }

    #[test]
    fn marginal_probabilities() {
        let p = |z: f64| {
            let mut s = StateVector::new_zero_state(1).unwrap();
            s.apply_gate(&GateOp::Ry { target: 0, angle: z }).unwrap();
            s.marginal_probability_one(0).unwrap()
        };
        assert!((p(FRAC_PI_2) - 0.5).abs() < 1e-15);
        assert_eq!(p(0.0), 0.0);
        assert!((p(PI) - 1.0).abs() < 1e-15);
        assert!(StateVector::new_zero_state(1)
            .unwrap()
            .marginal_probability_one(1)
            .is_err());
    }

    #[test]
    fn from_amplitudes_checks() {
        assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![c(r, 0.0), c(0.0, r)]).unwrap();
        assert_eq!(s.num_qubits(), 1);
    }
}
