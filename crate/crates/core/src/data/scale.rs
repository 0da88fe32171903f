use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Per-feature min-max map onto `[0, pi]`, fit on one set and applied to
/// others. Values outside the fit range are clamped; a feature that was
/// constant on the fit set maps to `pi / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleTransform {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ScaleTransform {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot fit scaling on zero rows".into()))?;
        let mut min = first.clone();
        let mut max = first.clone();
        for r in rows {
            if r.len() != min.len() {
                return Err(Error::Shape("ragged feature rows".into()));
            }
            for (j, &x) in r.iter().enumerate() {
                min[j] = min[j].min(x);
                max[j] = max[j].max(x);
            }
        }
        Ok(Self { min, max })
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.min.len() {
            return Err(Error::Shape(format!(
                "scaling expects {} columns, got {}",
                self.min.len(),
                row.len()
            )));
        }
        Ok(row
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&x, (&lo, &hi))| {
                if hi > lo {
                    ((x - lo) / (hi - lo) * PI).clamp(0.0, PI)
                } else {
                    FRAC_PI_2
                }
            })
            .collect())
    }

    pub fn apply(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.apply_row(r)).collect()
    }

    pub fn digest(&self) -> String {
        super::digest_numbers(self.min.iter().chain(&self.max))
    }
}

/// Fit on `train`, then scale both `train` and `other`.
pub fn scale_fit_apply(
    train: &[Vec<f64>],
    other: &[Vec<f64>],
) -> Result<(ScaleTransform, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let t = ScaleTransform::fit(train)?;
    let a = t.apply(train)?;
    let b = t.apply(other)?;
    Ok((t, a, b))
}
