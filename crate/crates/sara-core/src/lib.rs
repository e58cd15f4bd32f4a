//! Angular sampling and loss-less reconstruction for uniform linear and
//! rectangular antenna arrays.
//!
//! The crate works in the linear angular domain (LAD), `eta = sin(theta) / 2`,
//! where the phase response of a uniform array is a pure complex exponential
//! of the scaled element position `y = 2 x / lambda`. Sampling the beamformed
//! response uniformly in LAD at the array bandwidth allows exact trigonometric
//! (Dirichlet-kernel) interpolation of the response at any angle, which is
//! what the reconstruction module implements, together with the detection and
//! evaluation machinery built on top of it.
//!
//! Modules:
//! - [`geometry`]: array layouts and LAD/angle coordinate transforms
//! - [`signal`]: steering, beamforming and scene scan synthesis
//! - [`plan`]: angular sampling sets (uniform LAD, uniform angle, reduced, extended)
//! - [`reconstruction`]: Dirichlet-kernel and DFT-based upsampling plus the cubic baseline
//! - [`detection`]: CFAR-thresholded iterative multi-target peak extraction
//! - [`metrics`]: RMSE, CRLB and detection-rate metrics

pub mod detection;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod plan;
pub mod reconstruction;
pub mod rng;
pub mod signal;
mod spline;

pub use error::SaraError;
pub use geometry::{angle_from_lad, lad_from_angle, UlaGeometry, UraGeometry};
pub use num_complex::Complex64;
pub use plan::{Domain, PlanKind, SamplingPlan, SamplingPlan2d};
pub use reconstruction::{LadGrid, LadResponse, LadResponse2d, Method};
pub use signal::{ScanMode, ScanRecord, Scatterer, Scene};

/// Linear angular domain coordinate, `eta = sin(theta) / 2`.
///
/// Physical angles map to `[-0.5, 0.5]`; the array response is periodic
/// beyond that interval.
pub type Lad = f64;
