//! Loss-less upsampling of sampled angular responses.
//!
//! The sampled sweep is placed on a fine circular grid (zeros between
//! samples), convolved with one period of the Dirichlet kernel matching the
//! array order, and for even orders the sign-flipped half of the doubled
//! period is discarded. The convolution runs either directly (`Lr`) or as a
//! DFT Hadamard product (`Ar`); both produce the exact trigonometric
//! interpolation of the samples and therefore the exact band-limited
//! response at every fine-grid point.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::SaraError;
use crate::geometry::{lad_from_angle, UraGeometry};
use crate::plan::{ura_plan, Domain, SamplingPlan};
use crate::signal::{dirichlet, ScanRecord, ScanRecord2d};
use crate::spline::CubicSpline;

/// Reconstruction route: direct circular convolution or the DFT identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Circular convolution in the angular domain, `O(G N U)`.
    Lr,
    /// `F^-1(F(l) . F(d))`, `O(G U log(G U))`.
    Ar,
}

/// Circular reconstruction grid.
///
/// `grid_order` is the number of sample slots per aliasing period (the scan
/// count G), `kernel_order` the Dirichlet order K governing replicas, and
/// `upsample` the output densification factor U. The working vectors have
/// `V = G U` entries, doubled when K is even because consecutive aliasing
/// intervals then carry opposite signs and the kernel only repeats every
/// second interval. Vectors are stored circularly shifted so index 0 sits at
/// coordinate zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadGrid {
    pub grid_order: usize,
    pub kernel_order: usize,
    pub upsample: usize,
    /// Spacing of the sample slots on the native axis (LAD or radians).
    pub sample_step: f64,
    pub domain: Domain,
}

impl LadGrid {
    /// Grid implied by a sampling plan at upsampling factor `upsample`.
    pub fn from_plan(plan: &SamplingPlan, upsample: usize) -> Result<Self, SaraError> {
        if plan.len() < 2 {
            return Err(SaraError::PlanError("grid needs at least 2 sample slots".into()));
        }
        if upsample == 0 {
            return Err(SaraError::PlanError("upsample factor must be >= 1".into()));
        }
        let step = plan.step();
        // Uniform slot spacing is what makes the circular machinery exact.
        for w in plan.points.windows(2) {
            if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
                return Err(SaraError::PlanError("plan points are not uniformly spaced".into()));
            }
        }
        Ok(Self {
            grid_order: plan.len(),
            kernel_order: plan.kernel_order,
            upsample,
            sample_step: step,
            domain: plan.domain,
        })
    }

    fn parity_factor(&self) -> usize {
        1 + (self.kernel_order - 1) % 2
    }

    /// Working vector length `V`.
    pub fn conv_len(&self) -> usize {
        self.grid_order * self.upsample * self.parity_factor()
    }

    /// Output length after the even-order discard, `G U`.
    pub fn output_len(&self) -> usize {
        self.grid_order * self.upsample
    }

    /// Spacing of the fine output grid on the native axis.
    pub fn fine_step(&self) -> f64 {
        self.sample_step / self.upsample as f64
    }

    /// Native coordinate of output index `u` (circular, index 0 at zero).
    pub fn coordinate(&self, u: usize) -> f64 {
        let half = self.output_len() / 2;
        let centered = if u < half { u as f64 } else { u as f64 - self.output_len() as f64 };
        centered * self.fine_step()
    }

    /// LAD of output index `u` (converts from the angle axis if needed).
    pub fn lad_of_index(&self, u: usize) -> f64 {
        match self.domain {
            Domain::Lad => self.coordinate(u),
            Domain::Angle => lad_from_angle(self.coordinate(u)),
        }
    }

    /// Ascending native coordinates of the output grid.
    pub fn natural_axis(&self) -> Vec<f64> {
        let n = self.output_len();
        let half = n / 2;
        (0..n).map(|i| (i as f64 - half as f64) * self.fine_step()).collect()
    }
}

/// Reconstructed response on the fine grid, stored circularly shifted
/// (index 0 at coordinate zero, wrap after half the window).
#[derive(Debug, Clone, PartialEq)]
pub struct LadResponse {
    pub grid: LadGrid,
    pub values: Vec<Complex64>,
}

impl LadResponse {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values reordered to ascending native coordinates.
    pub fn natural_values(&self) -> Vec<Complex64> {
        fft_to_natural(&self.values)
    }

    /// Index of the global magnitude maximum.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        let mut best_mag = f64::NEG_INFINITY;
        for (i, v) in self.values.iter().enumerate() {
            let m = v.norm_sqr();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        best
    }

    /// CSV export in natural order: coordinate, re, im, abs.
    pub fn to_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let axis_name = match self.grid.domain {
            Domain::Lad => "lad",
            Domain::Angle => "angle",
        };
        writeln!(w, "{axis_name},re,im,abs")?;
        for (x, v) in self.grid.natural_axis().iter().zip(self.natural_values()) {
            writeln!(w, "{x},{},{},{}", v.re, v.im, v.norm())?;
        }
        Ok(())
    }
}

/// Rotate a circularly shifted vector into ascending natural order.
pub fn fft_to_natural<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    let half = n / 2;
    (0..n).map(|i| v[(i + half) % n]).collect()
}

/// Inverse of [`fft_to_natural`].
pub fn natural_to_fft<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    let half = n - n / 2;
    (0..n).map(|i| v[(i + half) % n]).collect()
}

/// Place sample values on the fine circular grid (zeros elsewhere).
fn place_samples(
    points: &[f64],
    values: &[Complex64],
    grid: &LadGrid,
) -> Result<Vec<Complex64>, SaraError> {
    let v_len = grid.conv_len();
    let fine = grid.fine_step();
    let mut out = vec![Complex64::new(0.0, 0.0); v_len];
    let mut filled = vec![false; v_len];
    for (&p, &val) in points.iter().zip(values) {
        let idx_f = p / fine;
        let rounded = idx_f.round();
        if (idx_f - rounded).abs() * fine > 1e-9 {
            return Err(SaraError::GridError(format!(
                "sample position {p} is off the reconstruction grid"
            )));
        }
        let u = (rounded as i64).rem_euclid(v_len as i64) as usize;
        if filled[u] {
            return Err(SaraError::GridError(format!("duplicate sample at position {p}")));
        }
        filled[u] = true;
        out[u] = val;
    }
    Ok(out)
}

/// Sample vector of a scan record on `grid`: measured values at indices
/// `u = U n`, zeros at unscanned slots, circularly shifted to zero.
pub fn build_sample_vector(
    record: &ScanRecord,
    grid: &LadGrid,
) -> Result<Vec<Complex64>, SaraError> {
    if record.domain != grid.domain {
        return Err(SaraError::GridError("record and grid domains differ".into()));
    }
    place_samples(&record.positions(), &record.values(), grid)
}

/// One period of the Dirichlet kernel on the fine grid,
/// `d_u = D_K(u / (G U))`.
pub fn build_kernel_vector(kernel_order: usize, grid: &LadGrid) -> Vec<f64> {
    let v_len = grid.conv_len();
    let denom = (grid.grid_order * grid.upsample) as f64;
    (0..v_len).map(|u| dirichlet(kernel_order, u as f64 / denom)).collect()
}

/// Indices kept after the even-order discard: with even kernels the working
/// vector spans two aliasing intervals and the central half (the sign-flipped
/// replica) is dropped, leaving `G U` samples.
fn discard_even(mut full: Vec<Complex64>, grid: &LadGrid) -> Vec<Complex64> {
    if grid.parity_factor() == 1 {
        return full;
    }
    let gu = grid.output_len();
    // Keep [0, GU/2) and [3GU/2, 2GU): the non-aliased window around zero.
    let mut out = Vec::with_capacity(gu);
    out.extend_from_slice(&full[..gu / 2]);
    out.extend_from_slice(&full[3 * gu / 2..]);
    full.clear();
    out
}

/// Direct circular convolution of the sample and kernel vectors, then the
/// even-order discard. Cost scales with the number of non-zero samples.
pub fn reconstruct_lr(
    samples: &[Complex64],
    kernel: &[f64],
    grid: &LadGrid,
) -> Result<Vec<Complex64>, SaraError> {
    let v_len = grid.conv_len();
    if samples.len() != v_len {
        return Err(SaraError::DimensionError { expected: v_len, got: samples.len() });
    }
    if kernel.len() != v_len {
        return Err(SaraError::DimensionError { expected: v_len, got: kernel.len() });
    }
    let mut full = vec![Complex64::new(0.0, 0.0); v_len];
    for (v, &s) in samples.iter().enumerate() {
        if s == Complex64::new(0.0, 0.0) {
            continue;
        }
        // r[u] += s * d[(u - v) mod V] with a running wrapped index.
        let mut w = v_len - v;
        if w == v_len {
            w = 0;
        }
        for r in full.iter_mut() {
            *r += s * kernel[w];
            w += 1;
            if w == v_len {
                w = 0;
            }
        }
    }
    Ok(discard_even(full, grid))
}

fn fft_pair(len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(len)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(len), planner.plan_fft_inverse(len))
        })
        .clone()
}

/// Dirichlet kernel vector for a grid, cached per grid shape.
fn cached_kernel(grid: &LadGrid) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (grid.kernel_order, grid.grid_order, grid.upsample);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let kernel = Arc::new(build_kernel_vector(grid.kernel_order, grid));
    cache.lock().unwrap().insert(key, kernel.clone());
    kernel
}

/// Forward DFT of the Dirichlet kernel for a grid, cached per grid shape.
fn kernel_spectrum(grid: &LadGrid) -> Arc<Vec<Complex64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<Vec<Complex64>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (grid.kernel_order, grid.grid_order, grid.upsample);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let mut buf: Vec<Complex64> = build_kernel_vector(grid.kernel_order, grid)
        .into_iter()
        .map(|d| Complex64::new(d, 0.0))
        .collect();
    let (fwd, _) = fft_pair(buf.len());
    fwd.process(&mut buf);
    let spectrum = Arc::new(buf);
    cache.lock().unwrap().insert(key, spectrum.clone());
    spectrum
}

fn ar_with_spectrum(
    samples: &[Complex64],
    spectrum: &[Complex64],
    grid: &LadGrid,
) -> Vec<Complex64> {
    let v_len = grid.conv_len();
    let (fwd, inv) = fft_pair(v_len);
    let mut buf = samples.to_vec();
    fwd.process(&mut buf);
    for (b, s) in buf.iter_mut().zip(spectrum) {
        *b *= s;
    }
    inv.process(&mut buf);
    let scale = 1.0 / v_len as f64;
    for b in buf.iter_mut() {
        *b *= scale;
    }
    discard_even(buf, grid)
}

/// DFT route: identical output contract as [`reconstruct_lr`].
pub fn reconstruct_ar(
    samples: &[Complex64],
    kernel: &[f64],
    grid: &LadGrid,
) -> Result<Vec<Complex64>, SaraError> {
    let v_len = grid.conv_len();
    if samples.len() != v_len {
        return Err(SaraError::DimensionError { expected: v_len, got: samples.len() });
    }
    if kernel.len() != v_len {
        return Err(SaraError::DimensionError { expected: v_len, got: kernel.len() });
    }
    let mut spectrum: Vec<Complex64> =
        kernel.iter().map(|&d| Complex64::new(d, 0.0)).collect();
    let (fwd, _) = fft_pair(v_len);
    fwd.process(&mut spectrum);
    Ok(ar_with_spectrum(samples, &spectrum, grid))
}

/// Reconstruct sample values given in plan order; applies the `K / G`
/// normalization when the scan count differs from the kernel order.
fn reconstruct_values(
    points: &[f64],
    values: &[Complex64],
    grid: &LadGrid,
    method: Method,
) -> Result<Vec<Complex64>, SaraError> {
    let samples = place_samples(points, values, grid)?;
    let mut out = match method {
        Method::Ar => ar_with_spectrum(&samples, &kernel_spectrum(grid), grid),
        Method::Lr => reconstruct_lr(&samples, &cached_kernel(grid), grid)?,
    };
    let scale = grid.kernel_order as f64 / grid.grid_order as f64;
    if scale != 1.0 {
        for v in out.iter_mut() {
            *v *= scale;
        }
    }
    Ok(out)
}

/// Full pipeline from a scan record: place samples, convolve with the
/// kernel of `grid.kernel_order`, discard, and scale by `K / G` when the
/// scan count `G` differs from the kernel order `K`.
pub fn reconstruct_scaled(
    record: &ScanRecord,
    grid: &LadGrid,
    method: Method,
) -> Result<LadResponse, SaraError> {
    if record.domain != grid.domain {
        return Err(SaraError::GridError("record and grid domains differ".into()));
    }
    let values =
        reconstruct_values(&record.positions(), &record.values(), grid, method)?;
    Ok(LadResponse { grid: *grid, values })
}

/// Reconstruct a record over the grid implied by its plan.
pub fn reconstruct_response(
    record: &ScanRecord,
    plan: &SamplingPlan,
    upsample: usize,
    method: Method,
) -> Result<LadResponse, SaraError> {
    let grid = LadGrid::from_plan(plan, upsample)?;
    reconstruct_scaled(record, &grid, method)
}

/// Natural cubic-spline baseline: real and imaginary parts interpolated
/// independently over the sample axis and evaluated on the fine grid.
pub fn cubic_baseline(record: &ScanRecord, grid: &LadGrid) -> Result<LadResponse, SaraError> {
    if record.entries.len() < 4 {
        return Err(SaraError::PlanError(format!(
            "cubic baseline needs at least 4 samples, got {}",
            record.entries.len()
        )));
    }
    if record.domain != grid.domain {
        return Err(SaraError::GridError("record and grid domains differ".into()));
    }
    let xs = record.positions();
    let re: Vec<f64> = record.entries.iter().map(|e| e.value.re).collect();
    let im: Vec<f64> = record.entries.iter().map(|e| e.value.im).collect();
    let s_re = CubicSpline::new(&xs, &re);
    let s_im = CubicSpline::new(&xs, &im);
    let natural: Vec<Complex64> = grid
        .natural_axis()
        .into_iter()
        .map(|x| Complex64::new(s_re.eval(x), s_im.eval(x)))
        .collect();
    Ok(LadResponse { grid: *grid, values: natural_to_fft(&natural) })
}

/// 2D response on natural (ascending) axes, elevation-major rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LadResponse2d {
    pub az_axis: Vec<f64>,
    pub el_axis: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl LadResponse2d {
    pub fn value(&self, i_el: usize, i_az: usize) -> Complex64 {
        self.values[i_el * self.az_axis.len() + i_az]
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Row-major CSV of magnitudes with axis-declaring header lines.
    pub fn to_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let fmt_axis = |axis: &[f64]| {
            axis.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        writeln!(w, "# az: {}", fmt_axis(&self.az_axis))?;
        writeln!(w, "# el: {}", fmt_axis(&self.el_axis))?;
        for row in self.values.chunks(self.az_axis.len()) {
            let line: Vec<String> = row.iter().map(|v| v.norm().to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Run a 1D reconstruction over every row, then every column of the result.
/// The 2D kernel factors into the per-axis Dirichlet kernels, so the two
/// passes commute.
fn separable_2d(
    record: &ScanRecord2d,
    az_grid: &LadGrid,
    el_grid: &LadGrid,
    mut reconstruct_1d: impl FnMut(&[f64], &[Complex64], &LadGrid) -> Result<Vec<Complex64>, SaraError>,
) -> Result<LadResponse2d, SaraError> {
    let n_az = record.az_points.len();
    let n_el = record.el_points.len();
    if record.values.len() != n_az * n_el {
        return Err(SaraError::DimensionError {
            expected: n_az * n_el,
            got: record.values.len(),
        });
    }
    let az_out = az_grid.output_len();
    let el_out = el_grid.output_len();

    // Azimuth pass: one reconstruction per elevation row.
    let mut inter = vec![Complex64::new(0.0, 0.0); n_el * az_out];
    for i_el in 0..n_el {
        let row = &record.values[i_el * n_az..(i_el + 1) * n_az];
        let rec = reconstruct_1d(&record.az_points, row, az_grid)?;
        let natural = fft_to_natural(&rec);
        inter[i_el * az_out..(i_el + 1) * az_out].copy_from_slice(&natural);
    }

    // Elevation pass: one reconstruction per fine azimuth column.
    let mut out = vec![Complex64::new(0.0, 0.0); el_out * az_out];
    let mut column = vec![Complex64::new(0.0, 0.0); n_el];
    for j in 0..az_out {
        for i_el in 0..n_el {
            column[i_el] = inter[i_el * az_out + j];
        }
        let rec = reconstruct_1d(&record.el_points, &column, el_grid)?;
        let natural = fft_to_natural(&rec);
        for (i_el, v) in natural.into_iter().enumerate() {
            out[i_el * az_out + j] = v;
        }
    }

    Ok(LadResponse2d {
        az_axis: az_grid.natural_axis(),
        el_axis: el_grid.natural_axis(),
        values: out,
    })
}

/// Separable 2D reconstruction of a URA scan, upsampled by `upsample` on
/// both axes.
pub fn reconstruct_2d(
    record: &ScanRecord2d,
    g2: &UraGeometry,
    upsample: usize,
    method: Method,
) -> Result<LadResponse2d, SaraError> {
    let plan = ura_plan(g2);
    let az_grid = LadGrid::from_plan(&plan.azimuth, upsample)?;
    let el_grid = LadGrid::from_plan(&plan.elevation, upsample)?;
    separable_2d(record, &az_grid, &el_grid, |pts, vals, grid| {
        reconstruct_values(pts, vals, grid, method)
    })
}

/// Separable 2D cubic baseline (splines along rows, then columns).
pub fn cubic_baseline_2d(
    record: &ScanRecord2d,
    g2: &UraGeometry,
    upsample: usize,
) -> Result<LadResponse2d, SaraError> {
    if record.az_points.len() < 4 || record.el_points.len() < 4 {
        return Err(SaraError::PlanError("cubic baseline needs at least 4 samples per axis".into()));
    }
    let plan = ura_plan(g2);
    let az_grid = LadGrid::from_plan(&plan.azimuth, upsample)?;
    let el_grid = LadGrid::from_plan(&plan.elevation, upsample)?;
    separable_2d(record, &az_grid, &el_grid, |pts, vals, grid| {
        let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
        let im: Vec<f64> = vals.iter().map(|v| v.im).collect();
        let s_re = CubicSpline::new(pts, &re);
        let s_im = CubicSpline::new(pts, &im);
        let natural: Vec<Complex64> = grid
            .natural_axis()
            .into_iter()
            .map(|x| Complex64::new(s_re.eval(x), s_im.eval(x)))
            .collect();
        Ok(natural_to_fft(&natural))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UlaGeometry;
    use crate::plan::{extended_plan, lad_uniform_plan};
    use crate::rng::trial_rng;
    use crate::signal::{planar_wave_response, scan_scene, ScanMode, Scatterer, Scene};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn half_wave(n: usize) -> UlaGeometry {
        UlaGeometry::half_wavelength(n, 1.0).unwrap()
    }

    fn random_samples(grid: &LadGrid, seed: u64) -> Vec<Complex64> {
        // Random complex measurements on every sample slot of the grid.
        let mut rng = trial_rng(seed, 9, 0);
        let mut v = vec![Complex64::new(0.0, 0.0); grid.conv_len()];
        for n in 0..grid.grid_order {
            let u = (n * grid.upsample) % grid.conv_len();
            v[u] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        v
    }

    #[test]
    fn grid_shapes() {
        // Even order doubles the working length; output is always G U.
        let plan = lad_uniform_plan(&half_wave(4));
        let grid = LadGrid::from_plan(&plan, 2).unwrap();
        assert_eq!(grid.conv_len(), 16);
        assert_eq!(grid.output_len(), 8);

        let plan = lad_uniform_plan(&half_wave(5));
        let grid = LadGrid::from_plan(&plan, 3).unwrap();
        assert_eq!(grid.conv_len(), 15);
        assert_eq!(grid.output_len(), 15);
    }

    #[test]
    fn sample_vector_placement() {
        let g = half_wave(4);
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, 2).unwrap();
        let scene = Scene::noiseless(vec![Scatterer::unit(0.1)]);
        let rec = scan_scene(&scene, &g, &plan, ScanMode::RxOnly, 0.0, 1).unwrap();
        let v = build_sample_vector(&rec, &grid).unwrap();
        assert_eq!(v.len(), 16);
        let nonzero: Vec<usize> =
            v.iter().enumerate().filter(|(_, x)| x.norm() > 0.0).map(|(i, _)| i).collect();
        // Plan indices n = -2..1 land at U n mod V = {12, 14, 0, 2}.
        assert_eq!(nonzero, vec![0, 2, 12, 14]);
    }

    #[test]
    fn sample_vector_zero_and_anchor() {
        let g = half_wave(4);
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, 2).unwrap();
        let empty = ScanRecord { entries: vec![], scan_period: 0.0, domain: Domain::Lad };
        assert!(build_sample_vector(&empty, &grid).unwrap().iter().all(|v| v.norm() == 0.0));

        // A single acquisition at coordinate zero fills index 0.
        let one = ScanRecord {
            entries: vec![crate::signal::ScanEntry {
                position: 0.0,
                value: Complex64::new(2.0, -1.0),
                time: 0.0,
            }],
            scan_period: 0.0,
            domain: Domain::Lad,
        };
        let v = build_sample_vector(&one, &grid).unwrap();
        assert_eq!(v[0], Complex64::new(2.0, -1.0));
        assert!(v[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn off_grid_sample_rejected() {
        let g = half_wave(4);
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, 2).unwrap();
        let bad = ScanRecord {
            entries: vec![crate::signal::ScanEntry {
                position: 0.07,
                value: Complex64::new(1.0, 0.0),
                time: 0.0,
            }],
            scan_period: 0.0,
            domain: Domain::Lad,
        };
        assert!(matches!(build_sample_vector(&bad, &grid), Err(SaraError::GridError(_))));
    }

    #[test]
    fn kernel_vector_anchors() {
        let plan = lad_uniform_plan(&half_wave(8));
        let grid = LadGrid::from_plan(&plan, 4).unwrap();
        let d = build_kernel_vector(8, &grid);
        assert_eq!(d.len(), 64);
        assert_eq!(d[0], 1.0);
        // u = 2 with N U = 32 evaluates D_8(1/16).
        assert_abs_diff_eq!(d[2], 0.6407, epsilon = 5e-4);
        // Half-period index carries the sign-flipped replica for even orders.
        assert_abs_diff_eq!(d[32], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn impulse_reconstructs_shifted_kernel() {
        let plan = lad_uniform_plan(&half_wave(5));
        let grid = LadGrid::from_plan(&plan, 4).unwrap();
        let kernel = build_kernel_vector(5, &grid);
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.conv_len()];
        let shift = 2 * grid.upsample;
        samples[shift] = Complex64::new(1.0, 0.0);
        let rec = reconstruct_lr(&samples, &kernel, &grid).unwrap();
        for (u, v) in rec.iter().enumerate() {
            let expect = kernel[(u + grid.conv_len() - shift) % grid.conv_len()];
            assert_abs_diff_eq!(v.re, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn lr_equals_ar_on_random_input() {
        for (n, seed) in [(7usize, 1u64), (8, 2), (15, 3), (16, 4)] {
            let plan = lad_uniform_plan(&half_wave(n));
            let grid = LadGrid::from_plan(&plan, 16).unwrap();
            let samples = random_samples(&grid, seed);
            let kernel = build_kernel_vector(n, &grid);
            let lr = reconstruct_lr(&samples, &kernel, &grid).unwrap();
            let ar = reconstruct_ar(&samples, &kernel, &grid).unwrap();
            let max_diff = lr
                .iter()
                .zip(&ar)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(max_diff < 1e-9, "N={n}: max diff {max_diff}");
        }
    }

    /// Independent oracle: direct trigonometric interpolation, the plain
    /// sum of samples times Dirichlet kernels evaluated per output point.
    fn naive_interpolation(
        points: &[f64],
        values: &[Complex64],
        grid: &LadGrid,
        scale: f64,
    ) -> Vec<Complex64> {
        let aal_equiv = 1.0 / (grid.sample_step * grid.grid_order as f64);
        (0..grid.output_len())
            .map(|u| {
                let l = grid.coordinate(u);
                points
                    .iter()
                    .zip(values)
                    .map(|(&p, &v)| {
                        v * dirichlet(grid.kernel_order, aal_equiv * (l - p))
                    })
                    .sum::<Complex64>()
                    * scale
            })
            .collect()
    }

    #[test]
    fn ar_matches_naive_summation() {
        for n in [7usize, 8, 15, 16] {
            let g = half_wave(n);
            let plan = lad_uniform_plan(&g);
            let grid = LadGrid::from_plan(&plan, 8).unwrap();
            let mut rng = trial_rng(n as u64, 3, 0);
            let values: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let rec = reconstruct_values(&plan.points, &values, &grid, Method::Ar).unwrap();
            let oracle = naive_interpolation(&plan.points, &values, &grid, 1.0);
            let max_diff = rec
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(max_diff < 1e-9, "N={n}: max diff {max_diff}");
        }
    }

    #[test]
    fn noiseless_wave_reconstructs_exactly() {
        // The loss-less property: the upsampled reconstruction matches a
        // dense direct scan of the same scene at every fine grid point.
        for n in [8usize, 9, 16] {
            let g = half_wave(n);
            let plan = lad_uniform_plan(&g);
            let scene = Scene::noiseless(vec![Scatterer {
                lad: 0.2,
                amplitude: Complex64::new(0.8, -0.3),
                radial_speed: 0.0,
            }]);
            let rec = scan_scene(&scene, &g, &plan, ScanMode::RxOnly, 0.0, 1).unwrap();
            let resp = reconstruct_response(&rec, &plan, 16, Method::Ar).unwrap();
            for u in 0..resp.len() {
                let l = resp.grid.coordinate(u);
                let expect = scene.scatterers[0].amplitude * planar_wave_response(&g, l, 0.2);
                assert!(
                    (resp.values[u] - expect).norm() < 1e-10,
                    "N={n} u={u}: {} vs {expect}",
                    resp.values[u]
                );
            }
        }
    }

    #[test]
    fn single_target_peak_recovered() {
        // Target at LAD 0.2 reconstructs with unit peak at 0.2.
        let g = half_wave(16);
        let co = g.sum_coarray();
        let plan = lad_uniform_plan(&co);
        let scene = Scene::noiseless(vec![Scatterer::unit(0.2)]);
        let rec = scan_scene(&scene, &g, &plan, ScanMode::Monostatic, 0.0, 1).unwrap();
        let resp = reconstruct_response(&rec, &plan, 16, Method::Ar).unwrap();
        let peak = resp.argmax();
        let l = resp.grid.coordinate(peak);
        assert!((l - 0.2).abs() <= resp.grid.fine_step() / 2.0 + 1e-12);
        assert_abs_diff_eq!(resp.values[peak].norm(), 1.0, epsilon = 1e-2);
    }

    #[test]
    fn even_discard_respects_replica_sign() {
        // The discarded half of the doubled period carries the value at
        // l - lambda/(2d) with flipped sign (even orders).
        let n = 8;
        let g = half_wave(n);
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, 4).unwrap();
        let samples = random_samples(&grid, 7);
        let kernel = build_kernel_vector(n, &grid);

        // Full (pre-discard) convolution, computed inline.
        let v_len = grid.conv_len();
        let mut full = vec![Complex64::new(0.0, 0.0); v_len];
        for (v, &s) in samples.iter().enumerate() {
            if s.norm() == 0.0 {
                continue;
            }
            for (u, r) in full.iter_mut().enumerate() {
                *r += s * kernel[(u + v_len - v) % v_len];
            }
        }
        let kept = reconstruct_lr(&samples, &kernel, &grid).unwrap();
        let gu = grid.output_len();
        // Output index u < GU/2 corresponds to pre-discard index u; its
        // replica one aliasing period away sits at u + GU with sign -1.
        for u in 0..gu / 2 {
            let replica = full[u + gu];
            assert!((kept[u] + replica).norm() < 1e-9);
        }
    }

    #[test]
    fn extended_plan_matches_minimal_reconstruction() {
        // Oversampled scan with the K/G factor equals the minimal scan
        // reconstruction on a noiseless scene.
        let g = half_wave(8);
        let scene = Scene::noiseless(vec![Scatterer::unit(0.13)]);

        let minimal = lad_uniform_plan(&g);
        let rec_min = scan_scene(&scene, &g, &minimal, ScanMode::RxOnly, 0.0, 1).unwrap();
        let resp_min = reconstruct_response(&rec_min, &minimal, 16, Method::Ar).unwrap();

        let ext = extended_plan(&g, 16).unwrap();
        let rec_ext = scan_scene(&scene, &g, &ext, ScanMode::RxOnly, 0.0, 1).unwrap();
        let resp_ext = reconstruct_response(&rec_ext, &ext, 8, Method::Ar).unwrap();

        // Same output grid (128 points over the same window).
        assert_eq!(resp_min.len(), resp_ext.len());
        let min_nat = resp_min.natural_values();
        let ext_nat = resp_ext.natural_values();
        let max_diff = min_nat
            .iter()
            .zip(&ext_nat)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_diff < 1e-9, "max diff {max_diff}");
    }

    #[test]
    fn reduced_roi_keeps_boresight_peak() {
        let g = half_wave(16);
        let full_plan = lad_uniform_plan(&g);
        // Off-grid target near boresight so the dropped samples carry energy.
        let scene = Scene::noiseless(vec![Scatterer::unit(0.02)]);
        let rec_full = scan_scene(&scene, &g, &full_plan, ScanMode::RxOnly, 0.0, 1).unwrap();
        let resp_full = reconstruct_response(&rec_full, &full_plan, 16, Method::Ar).unwrap();

        let roi = crate::plan::reduced_plan(&g, 8, Some((-0.25, 0.25))).unwrap();
        let rec_roi = scan_scene(&scene, &g, &roi, ScanMode::RxOnly, 0.0, 1).unwrap();
        assert_eq!(rec_roi.entries.len(), 8);
        let resp_roi = reconstruct_response(&rec_roi, &roi, 16, Method::Ar).unwrap();

        let full_peak = resp_full.argmax();
        let roi_peak = resp_roi.argmax();
        let du = (full_peak as i64 - roi_peak as i64).rem_euclid(resp_full.len() as i64);
        assert!(du <= 1 || du >= resp_full.len() as i64 - 1, "peak moved by {du} bins");

        let energy = |r: &LadResponse| r.values.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let e_roi = energy(&resp_roi);
        let e_full = energy(&resp_full);
        assert!(e_roi < e_full);
        assert!(e_roi > 0.25 * e_full);
    }

    #[test]
    fn linearity_of_reconstruction() {
        let g = half_wave(8);
        let plan = lad_uniform_plan(&g);
        let s1 = Scene::noiseless(vec![Scatterer::unit(0.1)]);
        let s2 = Scene::noiseless(vec![Scatterer {
            lad: -0.3,
            amplitude: Complex64::new(0.0, 1.5),
            radial_speed: 0.0,
        }]);
        let both = Scene::noiseless(vec![s1.scatterers[0], s2.scatterers[0]]);

        let resp = |scene: &Scene| {
            let rec = scan_scene(scene, &g, &plan, ScanMode::RxOnly, 0.0, 1).unwrap();
            reconstruct_response(&rec, &plan, 8, Method::Ar).unwrap()
        };
        let r1 = resp(&s1);
        let r2 = resp(&s2);
        let rb = resp(&both);
        for u in 0..rb.len() {
            assert!((rb.values[u] - r1.values[u] - r2.values[u]).norm() < 1e-10);
        }
    }

    #[test]
    fn cubic_interpolates_sample_points() {
        let g = half_wave(16);
        let plan = lad_uniform_plan(&g);
        let scene = Scene::noiseless(vec![Scatterer::unit(0.21)]);
        let rec = scan_scene(&scene, &g, &plan, ScanMode::RxOnly, 0.0, 1).unwrap();
        let grid = LadGrid::from_plan(&plan, 16).unwrap();
        let resp = cubic_baseline(&rec, &grid).unwrap();
        let natural = resp.natural_values();
        let axis = resp.grid.natural_axis();
        for e in &rec.entries {
            let idx = axis
                .iter()
                .position(|&x| (x - e.position).abs() < 1e-12)
                .expect("sample point on fine grid");
            assert!((natural[idx] - e.value).norm() < 1e-10);
        }
    }

    #[test]
    fn cubic_distorts_off_grid_peak() {
        // The spline peak misses the exact location/amplitude the kernel
        // reconstruction nails.
        let g = half_wave(16);
        let co = g.sum_coarray();
        let plan = lad_uniform_plan(&co);
        let scene = Scene::noiseless(vec![Scatterer::unit(0.2)]);
        let rec = scan_scene(&scene, &g, &plan, ScanMode::Monostatic, 0.0, 1).unwrap();
        let grid = LadGrid::from_plan(&plan, 16).unwrap();
        let sara = reconstruct_scaled(&rec, &grid, Method::Ar).unwrap();
        let cubic = cubic_baseline(&rec, &grid).unwrap();
        let sara_peak = sara.values[sara.argmax()].norm();
        let cubic_peak = cubic.values[cubic.argmax()].norm();
        assert_abs_diff_eq!(sara_peak, 1.0, epsilon = 1e-2);
        assert!((cubic_peak - 1.0).abs() > 5e-3, "cubic peak {cubic_peak} too exact");
    }

    #[test]
    fn cubic_needs_four_samples() {
        let g = half_wave(4);
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, 4).unwrap();
        let scene = Scene::noiseless(vec![Scatterer::unit(0.0)]);
        let mut rec = scan_scene(&scene, &g, &plan, ScanMode::RxOnly, 0.0, 1).unwrap();
        rec.entries.truncate(3);
        assert!(matches!(cubic_baseline(&rec, &grid), Err(SaraError::PlanError(_))));
    }

    #[test]
    fn separable_2d_matches_direct_dense_scan() {
        use crate::geometry::UraGeometry;
        use crate::plan::ura_plan;
        use crate::signal::{scan_scene_2d, Scatterer2d, Scene2d};

        let g2 = UraGeometry::square(8, 0.5, 1.0).unwrap();
        let scene = Scene2d {
            scatterers: vec![
                Scatterer2d { lad_az: 0.1, lad_el: -0.05, amplitude: Complex64::new(1.0, 0.2) },
                Scatterer2d { lad_az: -0.3, lad_el: 0.2, amplitude: Complex64::new(-0.5, 0.7) },
            ],
            noise_power: 0.0,
        };
        let upsample = 4;
        let coarse = scan_scene_2d(&scene, &g2, &ura_plan(&g2), ScanMode::RxOnly, 1).unwrap();
        let resp = reconstruct_2d(&coarse, &g2, upsample, Method::Ar).unwrap();

        // Dense scan grid: same spacing, upsample-times the element count
        // gives the fine sampling set n / (N U).
        let fine_g2 = UraGeometry::square(8 * upsample, 0.5, 1.0).unwrap();
        let dense_plan = ura_plan(&fine_g2);
        let mut max_diff = 0.0f64;
        for (i_el, &el) in resp.el_axis.iter().enumerate() {
            for (i_az, &az) in resp.az_axis.iter().enumerate() {
                let mut direct = Complex64::new(0.0, 0.0);
                for s in &scene.scatterers {
                    direct += s.amplitude
                        * planar_wave_response(g2.horizontal(), az, s.lad_az)
                        * planar_wave_response(g2.vertical(), el, s.lad_el);
                }
                max_diff = max_diff.max((resp.value(i_el, i_az) - direct).norm());
            }
        }
        assert!(max_diff < 1e-9, "max diff {max_diff}");
        // Axis consistency with the dense plan grid.
        assert_eq!(dense_plan.azimuth.points.len(), resp.az_axis.len());
        for (a, b) in dense_plan.azimuth.points.iter().zip(&resp.az_axis) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn point_target_2d_is_kernel_product() {
        use crate::geometry::UraGeometry;
        use crate::plan::ura_plan;
        use crate::signal::{scan_scene_2d, Scatterer2d, Scene2d};

        let g2 = UraGeometry::square(4, 0.5, 1.0).unwrap();
        let scene = Scene2d {
            scatterers: vec![Scatterer2d {
                lad_az: 0.0,
                lad_el: 0.0,
                amplitude: Complex64::new(1.0, 0.0),
            }],
            noise_power: 0.0,
        };
        let coarse = scan_scene_2d(&scene, &g2, &ura_plan(&g2), ScanMode::RxOnly, 1).unwrap();
        let resp = reconstruct_2d(&coarse, &g2, 5, Method::Ar).unwrap();
        for (i_el, &el) in resp.el_axis.iter().enumerate() {
            for (i_az, &az) in resp.az_axis.iter().enumerate() {
                let expect = dirichlet(4, az) * dirichlet(4, el);
                assert!((resp.value(i_el, i_az).re - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn axis_order_commutes() {
        use crate::geometry::UraGeometry;
        use crate::plan::ura_plan;
        use crate::signal::{scan_scene_2d, Scatterer2d, Scene2d};

        // Swapping the two passes (transpose, reconstruct, transpose back)
        // gives the same field.
        let g2 = UraGeometry::square(4, 0.5, 1.0).unwrap();
        let scene = Scene2d {
            scatterers: vec![Scatterer2d {
                lad_az: 0.12,
                lad_el: -0.2,
                amplitude: Complex64::new(0.3, 0.9),
            }],
            noise_power: 0.0,
        };
        let rec = scan_scene_2d(&scene, &g2, &ura_plan(&g2), ScanMode::RxOnly, 1).unwrap();
        let a = reconstruct_2d(&rec, &g2, 4, Method::Ar).unwrap();

        let n = rec.az_points.len();
        let transposed = ScanRecord2d {
            az_points: rec.el_points.clone(),
            el_points: rec.az_points.clone(),
            values: (0..rec.values.len())
                .map(|i| rec.values[(i % n) * n + i / n])
                .collect(),
        };
        let bt = reconstruct_2d(&transposed, &g2, 4, Method::Ar).unwrap();
        for i_el in 0..a.el_axis.len() {
            for i_az in 0..a.az_axis.len() {
                assert!((a.value(i_el, i_az) - bt.value(i_az, i_el)).norm() < 1e-9);
            }
        }
    }
}
