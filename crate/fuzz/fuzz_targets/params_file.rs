#![no_main]

use cffqnn::artifact::ParamsFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(p) = ParamsFile::parse(text) {
        assert_eq!(ParamsFile::parse(&p.to_text()).expect("printed file reparses"), p);
    }
});
