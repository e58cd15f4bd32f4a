//! Scenario configuration: JSON file plus flag overrides.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sara_core::{SaraError, ScanMode, UlaGeometry};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reconstruction / estimation method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    /// DFT-based kernel reconstruction.
    SaraAr,
    /// Circular-convolution kernel reconstruction.
    SaraLr,
    /// Cubic-spline baseline.
    Cubic,
    /// Raw sample maximum, no upsampling.
    Absmax,
    /// Kernel reconstruction from a reduced scan (N instead of 2N-1).
    SaraRed,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::SaraAr => "sara-ar",
            MethodKind::SaraLr => "sara-lr",
            MethodKind::Cubic => "cubic",
            MethodKind::Absmax => "absmax",
            MethodKind::SaraRed => "sara-red",
        }
    }
}

/// Which axis the sweep samples uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SamplingKind {
    Lad,
    Angle,
}

impl SamplingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplingKind::Lad => "lad",
            SamplingKind::Angle => "angle",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorSettings {
    pub p_fa: f64,
    pub kappa: f64,
    pub max_iterations: usize,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self { p_fa: 1e-3, kappa: 6.0, max_iterations: 10 }
    }
}

/// Monte Carlo scenario description. Defaults follow the reference setup:
/// 16 vertically polarized antennas at 28 GHz, half-wavelength spacing,
/// 8.93 us scan period, static targets within +/-60 degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub n_elements: usize,
    pub carrier_frequency_hz: f64,
    /// Element spacing as a fraction of the wavelength.
    pub spacing_ratio: f64,
    pub scan_period_s: f64,
    pub target_speed_ms: f64,
    pub theta_max_rad: f64,
    /// Per-antenna noise powers (dB) to sweep.
    pub noise_power_db: Vec<f64>,
    pub trials: usize,
    pub upsample: usize,
    pub sampling: SamplingKind,
    pub methods: Vec<MethodKind>,
    pub mode: ScanMode,
    pub detector: DetectorSettings,
    pub rng_seed: u64,
    /// Multi-target settings.
    pub n_targets: usize,
    pub delta_lad: Vec<f64>,
    pub kappa_values: Vec<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_elements: 16,
            carrier_frequency_hz: 28e9,
            spacing_ratio: 0.5,
            scan_period_s: 8.93e-6,
            target_speed_ms: 0.0,
            theta_max_rad: std::f64::consts::FRAC_PI_3,
            noise_power_db: vec![0.0, -5.0, -10.0, -15.0, -20.0, -25.0, -30.0],
            trials: 10_000,
            upsample: 16,
            sampling: SamplingKind::Lad,
            methods: vec![MethodKind::SaraAr, MethodKind::Cubic],
            mode: ScanMode::Monostatic,
            detector: DetectorSettings::default(),
            rng_seed: 1,
            n_targets: 3,
            delta_lad: vec![],
            kappa_values: vec![6.0],
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(s: &str) -> Result<Self, SaraError> {
        serde_json::from_str(s).map_err(|e| SaraError::ConfigError(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency_hz
    }

    pub fn validate(&self) -> Result<(), SaraError> {
        let positive = [
            ("carrier_frequency_hz", self.carrier_frequency_hz),
            ("spacing_ratio", self.spacing_ratio),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SaraError::ConfigError(format!("{name} must be positive, got {v}")));
            }
        }
        if self.scan_period_s < 0.0 || self.target_speed_ms < 0.0 {
            return Err(SaraError::ConfigError("times and speeds must be non-negative".into()));
        }
        if !(self.theta_max_rad > 0.0 && self.theta_max_rad <= std::f64::consts::FRAC_PI_2) {
            return Err(SaraError::ConfigError(format!(
                "theta_max_rad must lie in (0, pi/2], got {}",
                self.theta_max_rad
            )));
        }
        if self.upsample == 0 || self.trials == 0 {
            return Err(SaraError::ConfigError("trials and upsample must be positive".into()));
        }
        if self.methods.is_empty() || self.noise_power_db.is_empty() {
            return Err(SaraError::ConfigError("methods and noise sweep must be non-empty".into()));
        }
        Ok(())
    }

    /// Physical array described by the config.
    pub fn geometry(&self) -> Result<UlaGeometry, SaraError> {
        let lambda = self.wavelength();
        UlaGeometry::new(self.n_elements, self.spacing_ratio * lambda, lambda)
    }
}
