#![no_main]

use cffqnn::data::PreparedData;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(p) = PreparedData::parse(text) {
        assert_eq!(PreparedData::parse(&p.to_text()).expect("printed file reparses"), p);
    }
});
