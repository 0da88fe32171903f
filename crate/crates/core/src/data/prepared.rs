use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One partition after PCA and scaling, as written to disk.
///
/// ```text
/// #cffqnn-prepared k=7 rows=455 seed=42 partition=train pca_digest=... scale_digest=...
/// 0.31,2.9,...,1
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub k: usize,
    pub seed: u64,
    pub partition: String,
    pub pca_digest: String,
    pub scale_digest: String,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

const MAGIC: &str = "#cffqnn-prepared";

impl PreparedData {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{MAGIC} k={} rows={} seed={} partition={} pca_digest={} scale_digest={}\n",
            self.k,
            self.len(),
            self.seed,
            self.partition,
            self.pca_digest,
            self.scale_digest
        );
        for (row, y) in self.features.iter().zip(&self.labels) {
            for v in row {
                write!(out, "{v},").unwrap();
            }
            writeln!(out, "{y}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty prepared file"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some(MAGIC) {
            return Err(Error::parse(1, format!("expected header starting with {MAGIC}")));
        }
        let mut k = None;
        let mut rows = None;
        let mut seed = None;
        let mut partition = None;
        let mut pca_digest = None;
        let mut scale_digest = None;
        for f in fields {
            let (key, value) = f
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("header field {f:?} is not key=value")))?;
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::parse(1, format!("bad integer for {key}: {v:?}")))
            };
            match key {
                "k" => k = Some(num(value)? as usize),
                "rows" => rows = Some(num(value)? as usize),
                "seed" => seed = Some(num(value)?),
                "partition" => partition = Some(value.to_string()),
                "pca_digest" => pca_digest = Some(value.to_string()),
                "scale_digest" => scale_digest = Some(value.to_string()),
                _ => return Err(Error::parse(1, format!("unknown header field {key:?}"))),
            }
        }
        let missing = |name: &str| Error::parse(1, format!("header lacks {name}"));
        let k = k.ok_or_else(|| missing("k"))?;
        let rows = rows.ok_or_else(|| missing("rows"))?;
        if k == 0 {
            return Err(Error::parse(1, "k must be >= 1"));
        }

        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != k + 1 {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} fields, found {}", k + 1, cells.len()),
                ));
            }
            let row = cells[..k]
                .iter()
                .map(|c| {
                    c.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(line_no, format!("bad feature value {c:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let y = match cells[k] {
                "0" => 0,
                "1" => 1,
                other => return Err(Error::parse(line_no, format!("bad label {other:?}"))),
            };
            features.push(row);
            labels.push(y);
        }
        if labels.len() != rows {
            return Err(Error::parse(
                1,
                format!("header says {rows} rows, file has {}", labels.len()),
            ));
        }
        Ok(Self {
            k,
            seed: seed.ok_or_else(|| missing("seed"))?,
            partition: partition.ok_or_else(|| missing("partition"))?,
            pca_digest: pca_digest.ok_or_else(|| missing("pca_digest"))?,
            scale_digest: scale_digest.ok_or_else(|| missing("scale_digest"))?,
            features,
            labels,
        })
    }
}
