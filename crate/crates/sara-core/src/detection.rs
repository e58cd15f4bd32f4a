//! CFAR-thresholded iterative multi-target peak extraction.
//!
//! The detector scans the reconstructed response for its strongest peak,
//! refines the location with a three-point parabola, coherently subtracts
//! the peak's point spread function, and repeats. After the first detection
//! the threshold is raised to `max(zeta, kappa * S * |R_1(peak)|)` so kernel
//! sidelobes of strong targets do not fire, where `S` is the first-sidelobe
//! amplitude of the point spread function in use.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SaraError;
use crate::geometry::UlaGeometry;
use crate::reconstruction::LadResponse;
use crate::signal::{dirichlet, ScanMode};
use crate::Lad;

/// Detector settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Desired false-alarm probability per sweep.
    pub p_fa: f64,
    /// Sidelobe threshold scale; 0 disables the post-detection raise.
    pub kappa: f64,
    pub max_iterations: usize,
    /// Order of the physical array whose kernel shapes one target's response.
    pub kernel_order: usize,
    /// Post-combining noise power per scan sample.
    pub noise_power_post: f64,
    pub mode: ScanMode,
    /// AAL element gap `2 d / lambda` of the physical array.
    pub aal_gap: f64,
}

impl DetectorConfig {
    /// Config for an array operating in `mode` with per-antenna noise power
    /// `noise_power` (post-combining power becomes `sigma_n^2 / N`).
    pub fn for_array(
        g: &UlaGeometry,
        mode: ScanMode,
        p_fa: f64,
        noise_power: f64,
    ) -> Result<Self, SaraError> {
        if !(p_fa > 0.0 && p_fa < 1.0) {
            return Err(SaraError::ConfigError(format!("p_fa {p_fa} outside (0, 1)")));
        }
        Ok(Self {
            p_fa,
            kappa: 6.0,
            max_iterations: 10,
            kernel_order: g.n_elements(),
            noise_power_post: noise_power / g.n_elements() as f64,
            mode,
            aal_gap: g.aal_gap(),
        })
    }
}

/// One detected target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectedPeak {
    /// Refined position on the response's native axis.
    pub position: f64,
    /// Refined LAD estimate.
    pub lad: Lad,
    #[serde(with = "complex_serde")]
    pub amplitude: Complex64,
    /// 1-based extraction iteration.
    pub iteration: usize,
}

mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: v.re, im: v.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

/// Peaks in extraction order plus the thresholds that were active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub peaks: Vec<DetectedPeak>,
    pub zeta: f64,
    pub zeta_prime: f64,
}

impl DetectionReport {
    /// Single-line JSON, one record per trial.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn from_json_line(s: &str) -> Result<Self, SaraError> {
        serde_json::from_str(s).map_err(|e| SaraError::ConfigError(format!("report: {e}")))
    }
}

/// CFAR threshold for a sweep of `n_samples` i.i.d. complex Gaussian noise
/// samples of power `noise_power`:
/// `zeta = sqrt(-sigma^2 ln(1 - (1 - p_fa)^(1/n)))`.
pub fn cfar_threshold(
    noise_power: f64,
    p_fa: f64,
    n_samples: usize,
) -> Result<f64, SaraError> {
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(SaraError::ConfigError(format!("p_fa {p_fa} outside (0, 1)")));
    }
    if !(noise_power > 0.0) {
        return Err(SaraError::ConfigError(format!(
            "noise power {noise_power} must be positive"
        )));
    }
    let per_sample = 1.0 - (1.0 - p_fa).powf(1.0 / n_samples as f64);
    Ok((-noise_power * per_sample.ln()).sqrt())
}

/// First-sidelobe relative amplitude of the point spread function of an
/// order-`kernel_order` array in `mode`, determined numerically by
/// golden-section search between the first and second nulls.
pub fn first_sidelobe_amplitude(kernel_order: usize, mode: ScanMode) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (kernel_order, mode == ScanMode::Monostatic);
    if let Some(&hit) = cache.lock().unwrap().get(&key) {
        return hit;
    }

    let f = |u: f64| dirichlet(kernel_order, u).abs();
    let (mut a, mut b) = (1.0 / kernel_order as f64, 2.0 / kernel_order as f64);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    for _ in 0..200 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    let peak = f(0.5 * (a + b));
    let s = match mode {
        ScanMode::RxOnly => peak,
        ScanMode::Monostatic => peak * peak,
    };
    cache.lock().unwrap().insert(key, s);
    s
}

/// Point spread function value at LAD offset `dl`.
fn psf(cfg: &DetectorConfig, dl: f64) -> f64 {
    let d = dirichlet(cfg.kernel_order, cfg.aal_gap * dl);
    match cfg.mode {
        ScanMode::RxOnly => d,
        ScanMode::Monostatic => d * d,
    }
}

/// Complex value at a circular neighbor, with the replica sign applied when
/// the step crosses the aliasing boundary of an even-order response. The
/// magnitude is seamless either way.
fn neighbor(resp: &LadResponse, idx: usize, step: i64) -> Complex64 {
    let n = resp.len() as i64;
    let j = (idx as i64 + step).rem_euclid(n) as usize;
    let b = resp.len() / 2;
    // Index b-1 holds the largest positive coordinate, index b the most
    // negative one; stepping between them jumps one aliasing period.
    let crosses = (idx == b - 1 && j == b) || (idx == b && j == b - 1);
    let sign = if crosses && resp.grid.kernel_order % 2 == 0 { -1.0 } else { 1.0 };
    resp.values[j] * sign
}

/// Parabolic refinement of a local magnitude maximum at grid index `idx`.
///
/// Returns the refined native-axis position and the complex amplitude
/// interpolated at the parabola vertex (quadratic on re/im).
pub fn refine_peak(resp: &LadResponse, idx: usize) -> (f64, Complex64) {
    let c0 = resp.values[idx];
    let cm = neighbor(resp, idx, -1);
    let cp = neighbor(resp, idx, 1);
    let (m0, mm, mp) = (c0.norm(), cm.norm(), cp.norm());

    let denom = mm - 2.0 * m0 + mp;
    let mut delta = if denom == 0.0 { 0.0 } else { 0.5 * (mm - mp) / denom };
    if !delta.is_finite() {
        delta = 0.0;
    }
    delta = delta.clamp(-0.5, 0.5);

    let position = resp.grid.coordinate(idx) + delta * resp.grid.fine_step();
    let half_diff = 0.5 * (cp - cm);
    let curvature = 0.5 * (cp - 2.0 * c0 + cm);
    let amplitude = c0 + half_diff * delta + curvature * delta * delta;
    (position, amplitude)
}

/// Subtract one target's contribution `amp * PSF(l - lad_hat)` over the
/// whole fine grid.
pub fn subtract_peak(
    resp: &LadResponse,
    lad_hat: Lad,
    amplitude: Complex64,
    cfg: &DetectorConfig,
) -> LadResponse {
    let mut out = resp.clone();
    subtract_peak_in_place(&mut out, lad_hat, amplitude, cfg);
    out
}

fn subtract_peak_in_place(
    resp: &mut LadResponse,
    lad_hat: Lad,
    amplitude: Complex64,
    cfg: &DetectorConfig,
) {
    for u in 0..resp.len() {
        let l = resp.grid.lad_of_index(u);
        resp.values[u] -= amplitude * psf(cfg, l - lad_hat);
    }
}

/// Strict local maxima of the magnitude, circular.
fn local_maxima(resp: &LadResponse) -> Vec<usize> {
    let n = resp.len();
    let mags: Vec<f64> = resp.values.iter().map(|v| v.norm()).collect();
    (0..n)
        .filter(|&i| {
            let prev = mags[(i + n - 1) % n];
            let next = mags[(i + 1) % n];
            mags[i] > prev && mags[i] > next
        })
        .collect()
}

/// Circular distance between two native-axis positions.
fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let mut d = (a - b).rem_euclid(period);
    if d > period / 2.0 {
        d = period - d;
    }
    d
}

/// Iterative multi-target extraction.
///
/// Loop: locate the strongest remaining magnitude; stop when it falls below
/// the active threshold; refine; keep the estimate only if the original
/// response has a local maximum within one sample spacing of it (residuals
/// of earlier subtractions fail this test); subtract; after the first
/// iteration raise the threshold to `zeta'`.
pub fn detect(resp: &LadResponse, cfg: &DetectorConfig) -> DetectionReport {
    let zeta = cfar_threshold(cfg.noise_power_post, cfg.p_fa, resp.grid.grid_order)
        .expect("validated detector config");
    let window = resp.grid.sample_step;
    let period = resp.grid.fine_step() * resp.len() as f64;
    let sidelobe = first_sidelobe_amplitude(cfg.kernel_order, cfg.mode);

    let original_maxima: Vec<f64> = local_maxima(resp)
        .into_iter()
        .map(|i| resp.grid.coordinate(i))
        .collect();

    let mut work = resp.clone();
    let mut active = zeta;
    let mut zeta_prime = zeta;
    let mut peaks = Vec::new();

    for iteration in 1..=cfg.max_iterations {
        let idx = work.argmax();
        let magnitude = work.values[idx].norm();
        if magnitude <= active {
            break;
        }
        let (position, amplitude) = refine_peak(&work, idx);
        let lad = match resp.grid.domain {
            crate::plan::Domain::Lad => position,
            crate::plan::Domain::Angle => crate::geometry::lad_from_angle(position),
        };

        if iteration == 1 {
            zeta_prime = zeta.max(cfg.kappa * sidelobe * amplitude.norm());
            active = zeta_prime;
        }

        let near_original_peak = original_maxima
            .iter()
            .any(|&p| circular_distance(p, position, period) <= window);
        if near_original_peak {
            peaks.push(DetectedPeak { position, lad, amplitude, iteration });
        }
        // Remove the contribution either way so the loop makes progress.
        subtract_peak_in_place(&mut work, lad, amplitude, cfg);
    }

    DetectionReport { peaks, zeta, zeta_prime }
}
