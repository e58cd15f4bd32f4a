//! Campaign orchestration for the angular sampling and reconstruction
//! toolkit: scenario configs, Monte Carlo runners, the 2D imaging pipeline
//! and the reconstruction benchmark, all shared between the `sara` binary
//! and the test suites.

pub mod bench;
pub mod config;
pub mod imaging;
pub mod records;
pub mod runner;

pub use bench::{run_benchmark, BenchRow};
pub use config::{DetectorSettings, MethodKind, SamplingKind, ScenarioConfig};
pub use imaging::{generate_imaging_scene, run_imaging_2d, ImagingConfig, ImagingResult};
pub use records::StoredRecord;
pub use runner::{
    estimate_peak, reconstruct_for_method, run_multi_target, run_single_target, sweep_plan,
    MultiRow, SingleRow,
};

/// Long-format metric rows appended to `metrics.csv`:
/// scenario id, sweep value, metric name, value, trial count.
pub fn metrics_lines(
    scenario: &str,
    param: f64,
    metrics: &[(&str, f64)],
    trials: usize,
) -> Vec<String> {
    metrics
        .iter()
        .map(|(name, value)| format!("{scenario},{param},{name},{value},{trials}"))
        .collect()
}

pub const METRICS_CSV_HEADER: &str = "scenario,param,metric,value,trials";
