//! 2D URA imaging: dense reference scan, coarse scan, kernel and cubic
//! reconstructions, and the normalized reconstruction errors.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use sara_core::metrics::normalized_rmse_2d;
use sara_core::plan::ura_plan;
use sara_core::reconstruction::{cubic_baseline_2d, reconstruct_2d, LadResponse2d, Method};
use sara_core::rng::trial_rng;
use sara_core::signal::{scan_scene_2d, ScanMode, Scatterer2d, Scene2d};
use sara_core::{SaraError, UraGeometry};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ImagingConfig {
    /// Elements per URA axis.
    pub n_elements: usize,
    pub spacing_ratio: f64,
    pub upsample: usize,
    pub rng_seed: u64,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        Self { n_elements: 16, spacing_ratio: 0.5, upsample: 10, rng_seed: 1 }
    }
}

pub struct ImagingResult {
    /// Scatterer amplitudes accumulated on the fine grid.
    pub truth: LadResponse2d,
    /// Direct scan on the fine grid (the reference the array can resolve).
    pub dense: LadResponse2d,
    /// Coarse scan on the minimal grid.
    pub sampled: LadResponse2d,
    pub sara: LadResponse2d,
    pub cubic: LadResponse2d,
    pub eps_sara: f64,
    pub eps_cubic: f64,
}

/// Random object scene: `k` point scatterers uniform over the LAD square,
/// complex-normal amplitudes with mean and variance `1 / sqrt(2 k)`.
pub fn generate_imaging_scene(k: usize, seed: u64) -> Scene2d {
    let mut rng = trial_rng(seed, 7, 0);
    let mean = 1.0 / (2.0 * k as f64).sqrt();
    let std = (mean / 2.0).sqrt();
    let scatterers = (0..k)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Scatterer2d {
                lad_az: rand::Rng::random_range(&mut rng, -0.5..0.5),
                lad_el: rand::Rng::random_range(&mut rng, -0.5..0.5),
                amplitude: Complex64::new(mean + std * re, std * im),
            }
        })
        .collect();
    Scene2d { scatterers, noise_power: 0.0 }
}

/// Accumulate scatterer amplitudes onto the nearest cells of the fine grid.
fn render_truth(scene: &Scene2d, az_axis: &[f64], el_axis: &[f64]) -> LadResponse2d {
    let step_az = az_axis[1] - az_axis[0];
    let step_el = el_axis[1] - el_axis[0];
    let mut values = vec![Complex64::new(0.0, 0.0); az_axis.len() * el_axis.len()];
    for s in &scene.scatterers {
        let i_az = ((s.lad_az - az_axis[0]) / step_az).round() as isize;
        let i_el = ((s.lad_el - el_axis[0]) / step_el).round() as isize;
        let i_az = i_az.clamp(0, az_axis.len() as isize - 1) as usize;
        let i_el = i_el.clamp(0, el_axis.len() as isize - 1) as usize;
        values[i_el * az_axis.len() + i_az] += s.amplitude;
    }
    LadResponse2d { az_axis: az_axis.to_vec(), el_axis: el_axis.to_vec(), values }
}

/// Full imaging pipeline on an omni-directionally illuminated scene.
pub fn run_imaging_2d(scene: &Scene2d, cfg: &ImagingConfig) -> Result<ImagingResult, SaraError> {
    if cfg.upsample == 0 {
        return Err(SaraError::ConfigError("upsample must be >= 1".into()));
    }
    let lambda = 1.0;
    let spacing = cfg.spacing_ratio * lambda;
    let g2 = UraGeometry::square(cfg.n_elements, spacing, lambda)?;
    let fine_g2 = UraGeometry::square(cfg.n_elements * cfg.upsample, spacing, lambda)?;

    // Reference: the response the array would measure scanning every fine
    // direction (receive-only; the transmit side is omni-directional).
    let dense_rec = scan_scene_2d(scene, &g2, &ura_plan(&fine_g2), ScanMode::RxOnly, cfg.rng_seed)?;
    let dense = LadResponse2d {
        az_axis: dense_rec.az_points.clone(),
        el_axis: dense_rec.el_points.clone(),
        values: dense_rec.values.clone(),
    };

    let coarse_rec =
        scan_scene_2d(scene, &g2, &ura_plan(&g2), ScanMode::RxOnly, cfg.rng_seed.wrapping_add(1))?;
    let sampled = LadResponse2d {
        az_axis: coarse_rec.az_points.clone(),
        el_axis: coarse_rec.el_points.clone(),
        values: coarse_rec.values.clone(),
    };

    let sara = reconstruct_2d(&coarse_rec, &g2, cfg.upsample, Method::Ar)?;
    let cubic = cubic_baseline_2d(&coarse_rec, &g2, cfg.upsample)?;

    let eps_sara = normalized_rmse_2d(&sara, &dense)?;
    let eps_cubic = normalized_rmse_2d(&cubic, &dense)?;

    let truth = render_truth(scene, &dense.az_axis, &dense.el_axis);

    Ok(ImagingResult { truth, dense, sampled, sara, cubic, eps_sara, eps_cubic })
}
