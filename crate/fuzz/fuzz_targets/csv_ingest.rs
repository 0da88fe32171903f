#![no_main]

use cffqnn::data::{ingest_reader, CsvSchema};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let schema = CsvSchema {
        label_column: "label".into(),
        positive_label: "1".into(),
        exclude_columns: vec!["id".into()],
    };
    if let Ok(out) = ingest_reader(data, &schema) {
        assert!(out.dataset.features.iter().flatten().all(|v| v.is_finite()));
    }
});
