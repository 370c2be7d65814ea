#![no_main]

use gcplab_cli::config::{Experiment, ExperimentConfig, Overrides};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        let _ = Experiment::resolve(Some(cfg), Overrides::default(), None);
    }
});
