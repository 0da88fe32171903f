#![no_main]

use cffqnn::circuit::Circuit;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(c) = Circuit::parse_text(text) {
        // printing and reparsing must not lose gates
        let again = Circuit::parse_text(&c.to_text()).expect("printed circuit reparses");
        assert_eq!(again.len(), c.len());
        assert!(c.depth() <= c.len());
    }
});
