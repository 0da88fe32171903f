#![allow(dead_code)]

use std::f64::consts::PI;

use cffqnn::circuit::Circuit;
use cffqnn::qsim::GateOp;
use rand::Rng;

/// A random gate on `n` qubits drawn from the whole gate set.
pub fn random_gate(rng: &mut impl Rng, n: usize) -> GateOp {
    let target = rng.gen_range(0..n);
    let angle = rng.gen_range(-2.0 * PI..2.0 * PI);
    let other = |rng: &mut dyn rand::RngCore| {
        let c = rng.gen_range(0..n - 1);
        if c >= target {
            c + 1
        } else {
            c
        }
    };
    match rng.gen_range(0..if n > 1 { 5 } else { 3 }) {
        0 => GateOp::Ry { target, angle },
        1 => GateOp::H { target },
        2 => GateOp::Phase { target, angle },
        3 => GateOp::Cry {
            control: other(rng),
            target,
            angle,
        },
        _ => GateOp::Cnot {
            control: other(rng),
            target,
        },
    }
}

pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_gates: usize) -> Circuit {
    let n = rng.gen_range(1..=max_qubits);
    let mut c = Circuit::new(n).unwrap();
    for _ in 0..rng.gen_range(0..=max_gates) {
        c.push(random_gate(rng, n)).unwrap();
    }
    c
}

/// Output of one node fed by independent first-layer qubits: the first layer
/// puts qubit `i` in `cos(z_i/2)|0> + sin(z_i/2)|1>`; the node gets RY(bias)
/// and one CRY(theta_i) per input. Each branch `b` of the inputs occurs with
/// probability `prod p_i^b_i (1-p_i)^(1-b_i)` and leaves the node rotated by
/// `bias + sum b_i theta_i`, so `<Z>` is the branch average of its cosine.
pub fn branch_oracle(z: &[f64], bias: f64, theta: &[f64]) -> f64 {
    let n = z.len();
    let p1: Vec<f64> = z.iter().map(|v| (v / 2.0).sin().powi(2)).collect();
    (0..1usize << n)
        .map(|b| {
            let mut prob = 1.0;
            let mut angle = bias;
            for i in 0..n {
                if b >> i & 1 == 1 {
                    prob *= p1[i];
                    angle += theta[i];
                } else {
                    prob *= 1.0 - p1[i];
                }
            }
            prob * angle.cos()
        })
        .sum()
}

/// The circuit whose output [`branch_oracle`] predicts; node is qubit `n`.
pub fn branch_circuit(z: &[f64], bias: f64, theta: &[f64]) -> Circuit {
    let n = z.len();
    let mut c = Circuit::new(n + 1).unwrap();
    for (i, &zi) in z.iter().enumerate() {
        c.push(GateOp::Ry { target: i, angle: zi }).unwrap();
    }
    c.push(GateOp::Ry { target: n, angle: bias }).unwrap();
    for (i, &t) in theta.iter().enumerate() {
        c.push(GateOp::Cry {
            control: i,
            target: n,
            angle: t,
        })
        .unwrap();
    }
    c
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-5.0..5.0);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

pub fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// All eigenvalues, descending, by power iteration with Hotelling deflation
/// on `A + sI`, where `s` is the Frobenius norm so every shifted eigenvalue
/// is non-negative. Returns `None` when two shifted eigenvalues are too close
/// for the power method to separate in the iteration budget.
pub fn deflation_eigenvalues(a: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    let shift: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mut b: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[i][j] + if i == j { shift } else { 0.0 }).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7 + k * 3) % 11) as f64 * 0.1).collect();
        let mut lambda = 0.0;
        for _ in 0..50_000 {
            let w = mat_vec(&b, &v);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            v = w.into_iter().map(|x| x / norm).collect();
            lambda = v.iter().zip(mat_vec(&b, &v)).map(|(x, y)| x * y).sum();
        }
        for i in 0..n {
            for j in 0..n {
                b[i][j] -= lambda * v[i] * v[j];
            }
        }
        out.push(lambda);
    }
    // a near-degenerate pair leaves the power method mixing two directions
    if out.windows(2).any(|w| w[1] / w[0] > 0.999) {
        return None;
    }
    Some(out.into_iter().map(|l| l - shift).collect())
}
