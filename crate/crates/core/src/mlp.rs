//! Small sigmoid feed-forward network trained by full-batch gradient descent
//! on binary cross-entropy. Exists only as the classical comparison point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `weights[l][j]` is `[bias, w_1, ..., w_in]` for unit `j` of layer `l + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    widths: Vec<usize>,
    weights: Vec<Vec<Vec<f64>>>,
}

impl MlpModel {
    pub fn zeros(widths: &[usize]) -> Result<Self> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "bad MLP widths {widths:?}"
            )));
        }
        if *widths.last().unwrap() != 1 {
            return Err(Error::InvalidArgument("MLP output width must be 1".into()));
        }
        Ok(Self {
            widths: widths.to_vec(),
            weights: widths
                .windows(2)
                .map(|p| vec![vec![0.0; p[0] + 1]; p[1]])
                .collect(),
        })
    }

    /// Weights and biases drawn from `U[-0.5, 0.5]`.
    pub fn seeded(widths: &[usize], seed: u64) -> Result<Self> {
        let mut m = Self::zeros(widths)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in m.weights.iter_mut().flatten().flatten() {
            *w = rng.gen_range(-0.5..=0.5);
        }
        Ok(m)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().flatten().map(Vec::len).sum()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.weights.iter().flatten().flatten().copied().collect()
    }

    pub fn from_flat(widths: &[usize], flat: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(widths)?;
        if flat.len() != m.parameter_count() {
            return Err(Error::Shape(format!(
                "MLP {widths:?} needs {} parameters, got {}",
                m.parameter_count(),
                flat.len()
            )));
        }
        for (w, v) in m.weights.iter_mut().flatten().flatten().zip(flat) {
            *w = *v;
        }
        Ok(m)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.widths[0] {
            return Err(Error::Shape(format!(
                "MLP expects {} inputs, got {}",
                self.widths[0],
                x.len()
            )));
        }
        Ok(())
    }

    /// Activations of every layer, input included.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        for layer in &self.weights {
            let prev = acts.last().unwrap();
            let next = layer
                .iter()
                .map(|row| {
                    let z = row[1..].iter().zip(prev).fold(row[0], |s, (w, a)| s + w * a);
                    sigmoid(z)
                })
                .collect();
            acts.push(next);
        }
        acts
    }

    /// Class-1 probability.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.activations(x).last().unwrap()[0])
    }

    pub fn predict_class(&self, x: &[f64]) -> Result<u8> {
        Ok(u8::from(self.forward(x)? > 0.5))
    }

    /// Mean binary cross-entropy.
    pub fn loss(&self, rows: &[Vec<f64>], labels: &[u8]) -> Result<f64> {
        check_dataset(rows, labels)?;
        let mut total = 0.0;
        for (x, &y) in rows.iter().zip(labels) {
            let p = self.forward(x)?.clamp(1e-12, 1.0 - 1e-12);
            total -= if y == 1 { p.ln() } else { (1.0 - p).ln() };
        }
        Ok(total / rows.len() as f64)
    }

    /// Gradient of [`MlpModel::loss`] by backpropagation, laid out like
    /// [`MlpModel::to_flat`].
    pub fn gradient(&self, rows: &[Vec<f64>], labels: &[u8]) -> Result<Vec<f64>> {
        check_dataset(rows, labels)?;
        let mut grad: Vec<Vec<Vec<f64>>> = self
            .weights
            .iter()
            .map(|l| l.iter().map(|r| vec![0.0; r.len()]).collect())
            .collect();
        let scale = 1.0 / rows.len() as f64;
        for (x, &y) in rows.iter().zip(labels) {
            self.check_input(x)?;
            let acts = self.activations(x);
            // sigmoid + cross-entropy: dL/dz at the output is p - y
            let mut delta = vec![acts.last().unwrap()[0] - f64::from(y)];
            for l in (0..self.weights.len()).rev() {
                let input = &acts[l];
                for (j, d) in delta.iter().enumerate() {
                    grad[l][j][0] += scale * d;
                    for (i, a) in input.iter().enumerate() {
                        grad[l][j][i + 1] += scale * d * a;
                    }
                }
                if l > 0 {
                    delta = (0..input.len())
                        .map(|i| {
                            let back: f64 = self.weights[l]
                                .iter()
                                .zip(&delta)
                                .map(|(row, d)| row[i + 1] * d)
                                .sum();
                            back * input[i] * (1.0 - input[i])
                        })
                        .collect();
                }
            }
        }
        Ok(grad.into_iter().flatten().flatten().collect())
    }

    /// Full-batch gradient descent. Zero epochs returns an unchanged copy.
    pub fn train(
        &self,
        rows: &[Vec<f64>],
        labels: &[u8],
        epochs: usize,
        learning_rate: f64,
    ) -> Result<Self> {
        if !(learning_rate > 0.0) {
            return Err(Error::InvalidArgument("learning rate must be > 0".into()));
        }
        check_dataset(rows, labels)?;
        let mut model = self.clone();
        for _ in 0..epochs {
            let g = model.gradient(rows, labels)?;
            for (w, gi) in model.weights.iter_mut().flatten().flatten().zip(&g) {
                *w -= learning_rate * gi;
            }
        }
        Ok(model)
    }
}

fn check_dataset(rows: &[Vec<f64>], labels: &[u8]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty dataset".into()));
    }
    if rows.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} rows for {} labels",
            rows.len(),
            labels.len()
        )));
    }
    Ok(())
}
