//! Per-antenna signal synthesis and beamformed LAD responses.
//!
//! A point scatterer at LAD `eta` produces the per-antenna tone
//! `a_n = exp(j 2 pi y_n eta)`; matched beamforming toward LAD `l` averages
//! `a_n exp(-j 2 pi y_n l)`, which for a single planar wave collapses to the
//! Dirichlet kernel `D_N((2d/lambda)(l - eta))`. Scene scans add sequential
//! acquisition times (Doppler phase for moving scatterers) and post-combining
//! complex Gaussian noise of variance `sigma_n^2 / N`.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::SaraError;
use crate::geometry::UlaGeometry;
use crate::plan::{Domain, SamplingPlan};
use crate::rng::trial_rng;
use crate::Lad;

/// A unit point target: LAD position, complex reflection coefficient and
/// radial speed (m/s, positive toward the array).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub lad: Lad,
    pub amplitude: Complex64,
    pub radial_speed: f64,
}

impl Scatterer {
    /// Static unit-gain scatterer.
    pub fn unit(lad: Lad) -> Self {
        Self { lad, amplitude: Complex64::new(1.0, 0.0), radial_speed: 0.0 }
    }
}

/// A collection of point scatterers plus the per-antenna noise power
/// `sigma_n^2` (dimensionless, relative to unit transmit power).
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub scatterers: Vec<Scatterer>,
    pub noise_power: f64,
}

impl Scene {
    pub fn noiseless(scatterers: Vec<Scatterer>) -> Self {
        Self { scatterers, noise_power: 0.0 }
    }
}

#[derive(Serialize, Deserialize)]
struct ScattererSpec {
    lad: f64,
    amp_re: f64,
    amp_im: f64,
    #[serde(default)]
    speed: f64,
}

#[derive(Serialize, Deserialize)]
struct SceneSpec {
    scatterers: Vec<ScattererSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_power_db: Option<f64>,
}

impl Scene {
    /// Parse the JSON scene description
    /// `{"scatterers": [{"lad", "amp_re", "amp_im", "speed"}], "noise_power_db"}`.
    /// A missing `noise_power_db` means a noiseless scene.
    pub fn from_json(s: &str) -> Result<Self, SaraError> {
        let spec: SceneSpec =
            serde_json::from_str(s).map_err(|e| SaraError::PlanError(format!("scene: {e}")))?;
        let scatterers = spec
            .scatterers
            .into_iter()
            .map(|s| Scatterer {
                lad: s.lad,
                amplitude: Complex64::new(s.amp_re, s.amp_im),
                radial_speed: s.speed,
            })
            .collect();
        let noise_power = spec.noise_power_db.map_or(0.0, |db| 10f64.powf(db / 10.0));
        Ok(Self { scatterers, noise_power })
    }

    pub fn to_json(&self) -> String {
        let spec = SceneSpec {
            scatterers: self
                .scatterers
                .iter()
                .map(|s| ScattererSpec {
                    lad: s.lad,
                    amp_re: s.amplitude.re,
                    amp_im: s.amplitude.im,
                    speed: s.radial_speed,
                })
                .collect(),
            noise_power_db: if self.noise_power > 0.0 {
                Some(10.0 * self.noise_power.log10())
            } else {
                None
            },
        };
        serde_json::to_string_pretty(&spec).expect("scene serialization cannot fail")
    }
}

/// Whether the array only receives or transmits and receives (mono-static).
///
/// Mono-static operation squares the point spread function (transmit times
/// receive pattern) and doubles the Doppler shift (two-way propagation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    RxOnly,
    Monostatic,
}

impl ScanMode {
    fn doppler_ways(self) -> f64 {
        match self {
            ScanMode::RxOnly => 1.0,
            ScanMode::Monostatic => 2.0,
        }
    }

    /// Point spread function of the physical array at a LAD offset.
    pub fn psf(self, g: &UlaGeometry, dl: f64) -> f64 {
        let d = dirichlet(g.n_elements(), g.aal_gap() * dl);
        match self {
            ScanMode::RxOnly => d,
            ScanMode::Monostatic => d * d,
        }
    }
}

/// One acquired sample: the steered position (on the plan's native axis),
/// the beamformed complex value, and the acquisition time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub position: f64,
    pub value: Complex64,
    pub time: f64,
}

/// Ordered sweep of beamformed acquisitions, lowest steered position first,
/// one scan period apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub entries: Vec<ScanEntry>,
    pub scan_period: f64,
    pub domain: Domain,
}

impl ScanRecord {
    pub fn positions(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.position).collect()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

/// Analog steering weights toward LAD `l`: `w_n = exp(-j 2 pi y_n l)`.
pub fn steering_weights(g: &UlaGeometry, l: Lad) -> Vec<Complex64> {
    g.aal_positions()
        .into_iter()
        .map(|y| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * y * l))
        .collect()
}

/// Matched beamformer: `L_N(l) = (1/N) sum a_n exp(-j 2 pi y_n l)`.
///
/// `a` is the per-antenna signal; any complex amplitude (e.g. tapered) is
/// accepted.
pub fn beamform(a: &[Complex64], g: &UlaGeometry, l: Lad) -> Result<Complex64, SaraError> {
    if a.len() != g.n_elements() {
        return Err(SaraError::DimensionError { expected: g.n_elements(), got: a.len() });
    }
    let acc: Complex64 = a
        .iter()
        .zip(steering_weights(g, l))
        .map(|(s, w)| s * w)
        .sum();
    Ok(acc / g.n_elements() as f64)
}

/// Dirichlet kernel of order `n`: `D_n(u) = sin(pi n u) / (n sin(pi u))`.
///
/// At integer arguments the removable singularity evaluates to the limit
/// `(-1)^(k (n-1))`; the computation shifts by the nearest integer first,
/// which also keeps precision for large arguments.
pub fn dirichlet(n: usize, u: f64) -> f64 {
    debug_assert!(n >= 1);
    let k = u.round();
    let r = u - k;
    // Sign of the replica: (-1)^(k (n-1)).
    let sign = if (k as i64).rem_euclid(2) == 1 && n % 2 == 0 { -1.0 } else { 1.0 };
    if r == 0.0 {
        return sign;
    }
    let num = (std::f64::consts::PI * n as f64 * r).sin();
    let den = n as f64 * (std::f64::consts::PI * r).sin();
    sign * num / den
}

/// `sinc(x) = sin(pi x) / (pi x)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Noiseless receive-only response of a single planar wave at LAD `eta`
/// observed while steering at LAD `l`: `D_N((2d/lambda)(l - eta))`.
pub fn planar_wave_response(g: &UlaGeometry, l: Lad, eta: Lad) -> f64 {
    dirichlet(g.n_elements(), g.aal_gap() * (l - eta))
}

/// Per-antenna signals of a scene snapshot (no noise, no motion).
pub fn scene_antenna_signals(scene: &Scene, g: &UlaGeometry) -> Vec<Complex64> {
    let y = g.aal_positions();
    y.iter()
        .map(|&yn| {
            scene
                .scatterers
                .iter()
                .map(|s| {
                    s.amplitude
                        * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * yn * s.lad)
                })
                .sum()
        })
        .collect()
}

/// Draw one complex Gaussian sample with total variance `var`.
fn complex_gaussian(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Sequentially sweep a scene along `plan` and record the beamformed values.
///
/// The sweep runs from the lowest plan position to the highest, one scan
/// period apart; unscanned (zero-filled) plan slots consume no time. Each
/// scatterer contributes `amplitude * PSF(l_i - eta) * exp(j phi(t_i))` with
/// the Doppler phase `phi(t) = 2 pi (ways * v_r / lambda) t`, plus one
/// post-combining noise sample of variance `sigma_n^2 / N` per acquisition.
pub fn scan_scene(
    scene: &Scene,
    g: &UlaGeometry,
    plan: &SamplingPlan,
    mode: ScanMode,
    scan_period: f64,
    rng_seed: u64,
) -> Result<ScanRecord, SaraError> {
    if plan.is_empty() {
        return Err(SaraError::PlanError("empty plan".into()));
    }
    if plan.points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SaraError::PlanError("plan positions must be strictly ascending".into()));
    }

    let mut rng = trial_rng(rng_seed, 0, 0);
    let noise_var = scene.noise_power / g.n_elements() as f64;
    let two_pi = 2.0 * std::f64::consts::PI;

    let mut entries = Vec::with_capacity(plan.n_scanned());
    let mut acquisition = 0usize;
    for (i, &pos) in plan.points.iter().enumerate() {
        if !plan.is_scanned(i) {
            continue;
        }
        let l = match plan.domain {
            Domain::Lad => pos,
            Domain::Angle => crate::geometry::lad_from_angle(pos),
        };
        let t = acquisition as f64 * scan_period;
        acquisition += 1;

        let mut value = Complex64::new(0.0, 0.0);
        for s in &scene.scatterers {
            let psf = mode.psf(g, l - s.lad);
            let doppler = two_pi * mode.doppler_ways() * s.radial_speed / g.wavelength() * t;
            value += s.amplitude * psf * Complex64::from_polar(1.0, doppler);
        }
        if noise_var > 0.0 {
            value += complex_gaussian(&mut rng, noise_var);
        }
        entries.push(ScanEntry { position: pos, value, time: t });
    }
    Ok(ScanRecord { entries, scan_period, domain: plan.domain })
}

/// 2D scatterer: azimuth/elevation LAD pair and complex amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer2d {
    pub lad_az: Lad,
    pub lad_el: Lad,
    pub amplitude: Complex64,
}

/// 2D scene over a URA.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene2d {
    pub scatterers: Vec<Scatterer2d>,
    pub noise_power: f64,
}

#[derive(Serialize, Deserialize)]
struct Scatterer2dSpec {
    lad_az: f64,
    lad_el: f64,
    amp_re: f64,
    amp_im: f64,
}

#[derive(Serialize, Deserialize)]
struct Scene2dSpec {
    scatterers: Vec<Scatterer2dSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_power_db: Option<f64>,
}

impl Scene2d {
    pub fn from_json(s: &str) -> Result<Self, SaraError> {
        let spec: Scene2dSpec =
            serde_json::from_str(s).map_err(|e| SaraError::PlanError(format!("scene: {e}")))?;
        Ok(Self {
            scatterers: spec
                .scatterers
                .into_iter()
                .map(|s| Scatterer2d {
                    lad_az: s.lad_az,
                    lad_el: s.lad_el,
                    amplitude: Complex64::new(s.amp_re, s.amp_im),
                })
                .collect(),
            noise_power: spec.noise_power_db.map_or(0.0, |db| 10f64.powf(db / 10.0)),
        })
    }

    pub fn to_json(&self) -> String {
        let spec = Scene2dSpec {
            scatterers: self
                .scatterers
                .iter()
                .map(|s| Scatterer2dSpec {
                    lad_az: s.lad_az,
                    lad_el: s.lad_el,
                    amp_re: s.amplitude.re,
                    amp_im: s.amplitude.im,
                })
                .collect(),
            noise_power_db: if self.noise_power > 0.0 {
                Some(10.0 * self.noise_power.log10())
            } else {
                None
            },
        };
        serde_json::to_string_pretty(&spec).expect("scene serialization cannot fail")
    }
}

/// 2D scan grid: azimuth/elevation sample axes and the beamformed values in
/// elevation-major (row-major) order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord2d {
    pub az_points: Vec<f64>,
    pub el_points: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl ScanRecord2d {
    pub fn value(&self, i_el: usize, i_az: usize) -> Complex64 {
        self.values[i_el * self.az_points.len() + i_az]
    }
}

/// Scan a 2D scene over the cartesian plan of a URA.
///
/// The per-axis responses factor (`D_N` along azimuth times `D_M` along
/// elevation), so each direction is evaluated directly; noise is one
/// post-combining sample of variance `sigma_n^2 / (N M)` per acquisition.
pub fn scan_scene_2d(
    scene: &Scene2d,
    g2: &crate::geometry::UraGeometry,
    plan: &crate::plan::SamplingPlan2d,
    mode: ScanMode,
    rng_seed: u64,
) -> Result<ScanRecord2d, SaraError> {
    if plan.is_empty() {
        return Err(SaraError::PlanError("empty 2D plan".into()));
    }
    if plan.azimuth.domain != Domain::Lad || plan.elevation.domain != Domain::Lad {
        return Err(SaraError::PlanError("2D scans are LAD-domain only".into()));
    }
    let mut rng = trial_rng(rng_seed, 0, 0);
    let n_total = g2.horizontal().n_elements() * g2.vertical().n_elements();
    let noise_var = scene.noise_power / n_total as f64;

    let mut values = Vec::with_capacity(plan.len());
    for &el in &plan.elevation.points {
        for &az in &plan.azimuth.points {
            let mut v = Complex64::new(0.0, 0.0);
            for s in &scene.scatterers {
                let p = mode.psf(g2.horizontal(), az - s.lad_az) * mode.psf(g2.vertical(), el - s.lad_el);
                v += s.amplitude * p;
            }
            if noise_var > 0.0 {
                v += complex_gaussian(&mut rng, noise_var);
            }
            values.push(v);
        }
    }
    Ok(ScanRecord2d {
        az_points: plan.azimuth.points.clone(),
        el_points: plan.elevation.points.clone(),
        values,
    })
}
