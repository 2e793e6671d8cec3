//! Shared parameter sets for the benchmarks.

use ftr_core::{FtrParams, ScenarioA, ScenarioB};

/// Integer and non-integer fluctuation cases at a moderate specular ratio.
pub fn channels() -> Vec<(&'static str, FtrParams)> {
    vec![
        ("m1.5", FtrParams::new(1.0, 1.5, 10.0, 0.5).expect("valid")),
        ("m3", FtrParams::new(1.0, 3.0, 10.0, 0.5).expect("valid")),
        ("m0.7_k15", FtrParams::new(1.0, 0.7, 15.0, 1.0).expect("valid")),
    ]
}

/// Interference-plus-noise link at 20 dB normalized SINR.
pub fn scenario_a() -> ScenarioA {
    let w = 100.0 * (2.0 * 0.01 + 1.0);
    ScenarioA::new(FtrParams::new(w, 2.0, 10.0, 0.6).expect("valid"), 2, 0.01, 1.0, 1.0).expect("valid")
}

/// Two-branch MRC with one interferer at a 0 dB threshold.
pub fn scenario_b(n_antennas: u32) -> ScenarioB {
    ScenarioB::new(FtrParams::new(10.0, 1.5, 10.0, 0.6).expect("valid"), n_antennas, 1, 1.0, 1.0).expect("valid")
}
