//! Dataset ingestion and preprocessing: CSV loading, undersampling, stratified
//! splitting, PCA and angle scaling.

mod pca;
mod prepared;
mod scale;

pub use pca::{symmetric_eigen, PcaTransform, SymmetricEigen};
pub use prepared::PreparedData;
pub use scale::{scale_fit_apply, ScaleTransform};

use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Feature rows with 0/1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub column_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>, column_names: Vec<String>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} rows for {} labels",
                features.len(),
                labels.len()
            )));
        }
        if let Some(r) = features.iter().find(|r| r.len() != column_names.len()) {
            return Err(Error::Shape(format!(
                "row has {} values for {} columns",
                r.len(),
                column_names.len()
            )));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::InvalidArgument("labels must be 0 or 1".into()));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite feature value".into()));
        }
        Ok(Self {
            features,
            labels,
            column_names,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.column_names.len()
    }

    /// Rows per class, `[negatives, positives]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        [self.len() - pos, pos]
    }

    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            column_names: self.column_names.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub dataset: Dataset,
    /// Rows dropped for missing, unparsable or non-finite values.
    pub skipped: usize,
}

/// Which CSV column holds the label, and which of its values means class 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvSchema {
    pub label_column: String,
    pub positive_label: String,
    /// Columns ignored entirely (for example a row id).
    pub exclude_columns: Vec<String>,
}

pub fn ingest_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Ingested> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(file, schema)
}

/// Comma-delimited with a header row. Every non-label, non-excluded column is
/// a numeric feature.
pub fn ingest_reader<R: Read>(reader: R, schema: &CsvSchema) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .byte_headers()?
        .iter()
        .map(|h| String::from_utf8_lossy(h).trim().to_string())
        .collect();
    let label_idx = header
        .iter()
        .position(|h| *h == schema.label_column)
        .ok_or_else(|| Error::MissingColumn(schema.label_column.clone()))?;
    let feature_idx: Vec<usize> = (0..header.len())
        .filter(|&i| i != label_idx && !schema.exclude_columns.contains(&header[i]))
        .collect();
    if feature_idx.is_empty() {
        return Err(Error::InvalidArgument("no feature columns".into()));
    }
    let positive = schema.positive_label.trim().as_bytes();

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = 0;
    for record in rdr.byte_records() {
        let record = record?;
        if record.len() != header.len() {
            skipped += 1;
            continue;
        }
        let label = record[label_idx].trim_ascii();
        if label.is_empty() {
            skipped += 1;
            continue;
        }
        let row: Option<Vec<f64>> = feature_idx
            .iter()
            .map(|&i| {
                std::str::from_utf8(&record[i])
                    .ok()
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite())
            })
            .collect();
        match row {
            Some(row) => {
                features.push(row);
                labels.push(u8::from(label == positive));
            }
            None => skipped += 1,
        }
    }
    if features.is_empty() {
        return Err(Error::NoRows { skipped });
    }
    let column_names = feature_idx.iter().map(|&i| header[i].clone()).collect();
    Ok(Ingested {
        dataset: Dataset {
            features,
            labels,
            column_names,
        },
        skipped,
    })
}

/// Random undersampling of the majority class down to the minority count.
/// Surviving rows keep their original relative order.
pub fn balance(dataset: &Dataset, seed: u64) -> Result<Dataset> {
    let [neg, pos] = dataset.class_counts();
    for (class, count) in [(0u8, neg), (1u8, pos)] {
        if count == 0 {
            return Err(Error::MissingClass(class));
        }
    }
    let majority = u8::from(pos > neg);
    let keep = neg.min(pos);
    let mut major: Vec<usize> = (0..dataset.len())
        .filter(|&i| dataset.labels[i] == majority)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    major.shuffle(&mut rng);
    major.truncate(keep);
    let mut indices: Vec<usize> = (0..dataset.len())
        .filter(|&i| dataset.labels[i] != majority)
        .chain(major)
        .collect();
    indices.sort_unstable();
    Ok(dataset.select(&indices))
}

/// Stratified split. The training partition gets `floor(n * fraction)` rows,
/// shared between the classes in proportion to their size (largest remainder
/// first, ties to class 0); every class keeps at least one row on each side.
/// Returned index lists are sorted.
pub fn split_indices(labels: &[u8], train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let n = labels.len();
    let members: [Vec<usize>; 2] =
        [0u8, 1u8].map(|c| (0..n).filter(|&i| labels[i] == c).collect());
    for (c, m) in members.iter().enumerate() {
        if m.len() < 2 {
            return Err(Error::ClassTooSmall {
                class: c as u8,
                count: m.len(),
            });
        }
    }
    let n_train = (n as f64 * train_fraction + 1e-9).floor() as usize;
    let exact: Vec<f64> = members
        .iter()
        .map(|m| m.len() as f64 * n_train as f64 / n as f64)
        .collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut left = n_train - quota.iter().sum::<usize>();
    for &c in order.iter().cycle() {
        if left == 0 {
            break;
        }
        quota[c] += 1;
        left -= 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::with_capacity(n_train);
    let mut test = Vec::with_capacity(n - n_train);
    for (c, m) in members.iter().enumerate() {
        let q = quota[c].clamp(1, m.len() - 1);
        let mut m = m.clone();
        m.shuffle(&mut rng);
        train.extend_from_slice(&m[..q]);
        test.extend_from_slice(&m[q..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split(dataset: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (tr, te) = split_indices(&dataset.labels, train_fraction, seed)?;
    Ok((dataset.select(&tr), dataset.select(&te)))
}

/// Short hex digest of a list of numbers, used to tie artifacts to the
/// transform that produced them.
pub fn digest_numbers<'a>(values: impl IntoIterator<Item = &'a f64>) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn schema() -> CsvSchema {
        CsvSchema {
            label_column: "y".into(),
            positive_label: "1".into(),
            exclude_columns: vec![],
        }
    }

    fn toy(neg: usize, pos: usize) -> Dataset {
        let n = neg + pos;
        Dataset::new(
            (0..n).map(|i| vec![i as f64]).collect(),
            (0..n).map(|i| u8::from(i >= neg)).collect(),
            vec!["x".into()],
        )
        .unwrap()
    }

    #[test]
    fn ingest_small_csv() {
        let csv = "a,y,b\n1,0,2\n3,1,4\n5,0,6\n";
        let out = ingest_reader(csv.as_bytes(), &schema()).unwrap();
        assert_eq!(out.dataset.len(), 3);
        assert_eq!(out.dataset.labels, vec![0, 1, 0]);
        assert_eq!(out.dataset.column_names, vec!["a", "b"]);
        assert_eq!(out.dataset.features[1], vec![3.0, 4.0]);
        assert_eq!(out.skipped, 0);
    }

    #[test]
    fn ingest_skips_malformed_rows() {
        let mut csv = String::from("a,y\n");
        for i in 0..10 {
            if i == 4 {
                csv.push_str("oops,1\n");
            } else {
                csv.push_str(&format!("{i}.5,{}\n", i % 2));
            }
        }
        let out = ingest_reader(csv.as_bytes(), &schema()).unwrap();
        assert_eq!((out.dataset.len(), out.skipped), (9, 1));
        // short rows, empty labels, NaN and missing values are all rejected
        let csv = "a,y\n1\n2,\nNaN,0\n,1\n7,1\n";
        let out = ingest_reader(csv.as_bytes(), &schema()).unwrap();
        assert_eq!((out.dataset.len(), out.skipped), (1, 4));
    }

    #[test]
    fn ingest_errors() {
        assert!(matches!(
            ingest_reader("a,b\n1,2\n".as_bytes(), &schema()),
            Err(Error::MissingColumn(_))
        ));
        assert!(matches!(
            ingest_reader("a,y\nx,1\n".as_bytes(), &schema()),
            Err(Error::NoRows { skipped: 1 })
        ));
        assert!(ingest_reader("y\n1\n".as_bytes(), &schema()).is_err());
        assert!(matches!(
            ingest_csv("/definitely/not/here.csv", &schema()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn ingest_excludes_columns() {
        let s = CsvSchema {
            label_column: "diagnosis".into(),
            positive_label: "M".into(),
            exclude_columns: vec!["id".into()],
        };
        let out = ingest_reader("id,diagnosis,r\n7,M,1.5\n8,B,2.5\n".as_bytes(), &s).unwrap();
        assert_eq!(out.dataset.column_names, vec!["r"]);
        assert_eq!(out.dataset.labels, vec![1, 0]);
    }

    #[test]
    fn balance_examples() {
        let b = balance(&toy(100, 10), 1).unwrap();
        assert_eq!(b.class_counts(), [10, 10]);
        let b = balance(&toy(5, 5), 1).unwrap();
        assert_eq!(b.len(), 10);
        assert!(matches!(balance(&toy(5, 0), 1), Err(Error::MissingClass(1))));
        // deterministic per seed
        assert_eq!(balance(&toy(50, 7), 3).unwrap(), balance(&toy(50, 7), 3).unwrap());
    }

    #[test]
    fn split_sizes() {
        let (tr, te) = split_indices(&toy(492, 492).labels, 0.7, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (688, 296));
        let (tr, te) = split_indices(&toy(357, 212).labels, 0.8, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (455, 114));
        let d = toy(5, 5);
        let (tr, te) = split(&d, 0.5, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (5, 5));
        // 2.5 rows per class is the exact share; the tie goes to class 0
        assert_eq!(tr.class_counts(), [3, 2]);
        assert_eq!(te.class_counts(), [2, 3]);
    }

    #[test]
    fn split_partitions_and_is_deterministic() {
        let d = toy(40, 23);
        let (tr, te) = split_indices(&d.labels, 0.75, 9).unwrap();
        assert_eq!(split_indices(&d.labels, 0.75, 9).unwrap(), (tr.clone(), te.clone()));
        let a: HashSet<_> = tr.iter().collect();
        let b: HashSet<_> = te.iter().collect();
        assert!(a.is_disjoint(&b));
        assert_eq!(a.len() + b.len(), d.len());
    }

    #[test]
    fn split_errors() {
        assert!(split_indices(&[0, 0, 1, 1], 0.0, 1).is_err());
        assert!(split_indices(&[0, 0, 1, 1], 1.0, 1).is_err());
        assert!(matches!(
            split_indices(&[0, 0, 0, 1], 0.5, 1),
            Err(Error::ClassTooSmall { class: 1, count: 1 })
        ));
    }

    #[test]
    fn digests_differ() {
        assert_eq!(digest_numbers(&[1.0, 2.0]).len(), 16);
        assert_ne!(digest_numbers(&[1.0, 2.0]), digest_numbers(&[2.0, 1.0]));
    }
}
