#![no_main]

use cffqnn::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(c) = RunConfig::parse(text) {
        RunConfig::parse(&c.to_text()).expect("printed config reparses");
    }
});
