//! Derivative-free minimization by linear approximation (COBYLA), without
//! constraints.
//!
//! The method keeps a simplex of `n + 1` evaluated points with the best one as
//! base. The unique linear interpolant through the simplex gives a gradient
//! estimate `g`; the trial step is `-rho * g / |g|`, the minimizer of the
//! linear model on the trust region of radius `rho`. When the simplex gets
//! too flat or too stretched relative to `rho`, a vertex is moved along the
//! normal of its opposite face before the next trial step. `rho` halves when a
//! step from an acceptable simplex fails to achieve a tenth of its predicted
//! reduction, and the run stops at `rho_end` or when the budget runs out.

use crate::error::{Error, Result};

/// Smallest acceptable vertex-to-opposite-face distance, in units of rho.
const ALPHA: f64 = 0.25;
/// Longest acceptable edge from the base, in units of rho.
const BETA: f64 = 2.1;
/// Length of a geometry-repair step, in units of rho.
const GAMMA: f64 = 0.5;
const DELTA: f64 = 1.1;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub initial_point: Vec<f64>,
    /// Maximum number of objective evaluations, at least 1.
    pub budget: usize,
    pub trust_region_initial: f64,
    pub trust_region_final: f64,
}

impl ObjectiveSpec {
    pub fn new(initial_point: Vec<f64>, budget: usize) -> Self {
        Self {
            initial_point,
            budget,
            trust_region_initial: 1.0,
            trust_region_final: 1e-4,
        }
    }

    pub fn dimension(&self) -> usize {
        self.initial_point.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_point.is_empty() {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be >= 1".into()));
        }
        let (a, b) = (self.trust_region_initial, self.trust_region_final);
        if !(b > 0.0 && b < a && a.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < trust_region_final < trust_region_initial, got {b} and {a}"
            )));
        }
        if self.initial_point.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("initial point is not finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Trust-region radius when the run stopped.
    pub final_radius: f64,
}

struct Counter<F> {
    f: F,
    budget: usize,
    used: usize,
    best: (Vec<f64>, f64),
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let value = (self.f)(x);
        self.used += 1;
        if !value.is_finite() {
            return Err(Error::NonFinite {
                eval: self.used - 1,
                value,
            });
        }
        if value < self.best.1 {
            self.best = (x.to_vec(), value);
        }
        Ok(value)
    }
}

/// Minimize `f` starting from `spec.initial_point`.
///
/// The returned point is the best one evaluated, so it is never worse than
/// the starting point.
pub fn minimize<F>(spec: &ObjectiveSpec, f: F) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    spec.validate()?;
    let x0 = spec.initial_point.clone();
    let mut ctr = Counter {
        f,
        budget: spec.budget,
        used: 0,
        best: (x0.clone(), f64::INFINITY),
    };
    let f0 = ctr.eval(&x0)?;
    let mut rho = spec.trust_region_initial;

    let mut simplex = Simplex {
        points: vec![x0],
        values: vec![f0],
    };
    let finish = |ctr: Counter<F>, rho: f64| {
        let (point, value) = ctr.best;
        Ok(Minimum {
            point,
            value,
            evaluations: ctr.used,
            final_radius: rho,
        })
    };
    if !simplex.build_around_base(&mut ctr, rho)? {
        return finish(ctr, rho);
    }

    let mut just_repaired = false;
    loop {
        if ctr.exhausted() {
            return finish(ctr, rho);
        }
        simplex.move_best_to_base();
        let Some(model) = simplex.linear_model() else {
            // degenerate simplex, start over from the base point
            simplex.points.truncate(1);
            simplex.values.truncate(1);
            if !simplex.build_around_base(&mut ctr, rho)? {
                return finish(ctr, rho);
            }
            continue;
        };
        let acceptable = model
            .edge_len
            .iter()
            .zip(&model.face_dist)
            .all(|(&e, &s)| e <= BETA * rho && s >= ALPHA * rho);

        if !acceptable && !just_repaired {
            simplex.repair(&mut ctr, &model, rho)?;
            just_repaired = true;
            continue;
        }
        just_repaired = false;

        let gnorm = norm(&model.gradient);
        let ratio = if gnorm > 0.0 {
            let step: Vec<f64> = model.gradient.iter().map(|g| -rho * g / gnorm).collect();
            let trial: Vec<f64> = simplex.points[0].iter().zip(&step).map(|(x, d)| x + d).collect();
            let f_trial = ctr.eval(&trial)?;
            let predicted = rho * gnorm;
            let ratio = (simplex.values[0] - f_trial) / predicted;
            simplex.accept(&model, &step, trial, f_trial, rho);
            ratio
        } else {
            0.0
        };

        if ratio <= 0.1 {
            if !acceptable {
                continue;
            }
            if rho <= spec.trust_region_final {
                return finish(ctr, rho);
            }
            rho *= 0.5;
            if rho <= 1.5 * spec.trust_region_final {
                rho = spec.trust_region_final;
            }
        }
    }
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

struct LinearModel {
    gradient: Vec<f64>,
    /// Column `j` is the inverse-edge-matrix column for vertex `j + 1`.
    inverse: Vec<Vec<f64>>,
    edge_len: Vec<f64>,
    face_dist: Vec<f64>,
}

impl Simplex {
    /// Evaluate base + rho * e_i for every coordinate. A probe that beats the
    /// base becomes the new base at once, so later probes start from it.
    /// Returns false if the budget ran out first.
    fn build_around_base<F: FnMut(&[f64]) -> f64>(
        &mut self,
        ctr: &mut Counter<F>,
        rho: f64,
    ) -> Result<bool> {
        let n = self.points[0].len();
        for i in 0..n {
            if ctr.exhausted() {
                return Ok(false);
            }
            let mut x = self.points[0].clone();
            x[i] += rho;
            let fx = ctr.eval(&x)?;
            if fx < self.values[0] {
                let old = std::mem::replace(&mut self.points[0], x);
                let old_f = std::mem::replace(&mut self.values[0], fx);
                self.points.push(old);
                self.values.push(old_f);
            } else {
                self.points.push(x);
                self.values.push(fx);
            }
        }
        Ok(true)
    }

    fn move_best_to_base(&mut self) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = i;
            }
        }
        self.points.swap(0, best);
        self.values.swap(0, best);
    }

    fn edges(&self) -> Vec<Vec<f64>> {
        let base = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect()
    }

    fn linear_model(&self) -> Option<LinearModel> {
        let edges = self.edges();
        let inverse = invert(&edges)?;
        let n = edges.len();
        let df: Vec<f64> = self.values[1..].iter().map(|v| v - self.values[0]).collect();
        // rows of `edges` times g equal df, so g = inverse * df
        let gradient = (0..n)
            .map(|r| (0..n).map(|j| inverse[r][j] * df[j]).sum())
            .collect();
        let face_dist = (0..n)
            .map(|j| 1.0 / (0..n).map(|r| inverse[r][j].powi(2)).sum::<f64>().sqrt())
            .collect();
        let edge_len = edges.iter().map(|e| norm(e)).collect();
        Some(LinearModel {
            gradient,
            inverse,
            edge_len,
            face_dist,
        })
    }

    /// Replace the worst-shaped vertex by a point `GAMMA * rho` from the base
    /// along the normal of the vertex's opposite face, on the downhill side.
    fn repair<F: FnMut(&[f64]) -> f64>(
        &mut self,
        ctr: &mut Counter<F>,
        model: &LinearModel,
        rho: f64,
    ) -> Result<()> {
        let n = model.edge_len.len();
        let longest = argmax(&model.edge_len);
        let j = if model.edge_len[longest] > BETA * rho {
            longest
        } else {
            argmax(&model.face_dist.iter().map(|d| -d).collect::<Vec<_>>())
        };
        let normal: Vec<f64> = (0..n).map(|r| model.inverse[r][j]).collect();
        let scale = GAMMA * rho / norm(&normal);
        let mut step: Vec<f64> = normal.iter().map(|c| c * scale).collect();
        if dot(&step, &model.gradient) > 0.0 {
            step.iter_mut().for_each(|s| *s = -*s);
        }
        let x: Vec<f64> = self.points[0].iter().zip(&step).map(|(a, b)| a + b).collect();
        let fx = ctr.eval(&x)?;
        self.points[j + 1] = x;
        self.values[j + 1] = fx;
        Ok(())
    }

    /// Swap a trial point into the simplex if doing so keeps it well shaped,
    /// or unconditionally (best vertex permitting) if it improved on the base.
    fn accept(&mut self, model: &LinearModel, step: &[f64], x: Vec<f64>, fx: f64, rho: f64) {
        let n = step.len();
        let improved = fx < self.values[0];
        let threshold = if improved { 0.0 } else { 1.0 };
        let mut choice: Option<(usize, f64)> = None;
        for j in 0..n {
            // barycentric weight of the step on edge j
            let lambda = (0..n).map(|r| model.inverse[r][j] * step[r]).sum::<f64>().abs();
            if lambda <= threshold {
                continue;
            }
            let dist: f64 = self.points[j + 1]
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let score = lambda * (dist / (DELTA * rho)).powi(2).max(1.0);
            if choice.is_none_or(|(_, s)| score > s) {
                choice = Some((j, score));
            }
        }
        if let Some((j, _)) = choice {
            self.points[j + 1] = x;
            self.values[j + 1] = fx;
        }
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if numerically singular.
fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for k in 0..n {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..n {
                a[row][k] -= factor * a[col][k];
                inv[row][k] -= factor * inv[col][k];
            }
        }
    }
    Some(inv)
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}
