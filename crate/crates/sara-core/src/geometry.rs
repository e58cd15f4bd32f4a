//! Uniform array layouts and the LAD/angle coordinate transforms.
//!
//! Element positions live on the physical axis `x` (meters). The array
//! antenna location (AAL) axis rescales it to `y = 2 x / lambda`, which is
//! the Fourier-dual of the linear angular domain `eta = sin(theta) / 2`.

use serde::{Deserialize, Serialize};

use crate::error::SaraError;
use crate::Lad;

/// Uniform linear array: `n` elements spaced `d` meters apart, centered on
/// the origin, operating at wavelength `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaGeometry {
    n_elements: usize,
    spacing: f64,
    wavelength: f64,
}

impl UlaGeometry {
    pub fn new(n_elements: usize, spacing: f64, wavelength: f64) -> Result<Self, SaraError> {
        if n_elements < 2 {
            return Err(SaraError::InvalidGeometry(format!(
                "need at least 2 elements, got {n_elements}"
            )));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(SaraError::InvalidGeometry(format!("spacing {spacing} must be positive")));
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(SaraError::InvalidGeometry(format!(
                "wavelength {wavelength} must be positive"
            )));
        }
        Ok(Self { n_elements, spacing, wavelength })
    }

    /// Half-wavelength spacing at `wavelength`, the common default.
    pub fn half_wavelength(n_elements: usize, wavelength: f64) -> Result<Self, SaraError> {
        Self::new(n_elements, wavelength / 2.0, wavelength)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Gap between adjacent elements on the AAL axis, `2 d / lambda`.
    pub fn aal_gap(&self) -> f64 {
        2.0 * self.spacing / self.wavelength
    }

    /// Whether element spacing avoids aliases over the full physical LAD
    /// interval, i.e. `d <= lambda / 2`.
    pub fn aal_sampling_ok(&self) -> bool {
        self.spacing <= self.wavelength / 2.0
    }

    /// Total LAD bandwidth of the array, `B_N = 2 d N / lambda`.
    pub fn lad_bandwidth(&self) -> f64 {
        self.aal_gap() * self.n_elements as f64
    }

    /// Period of the array's LAD response, `lambda / (2d)` for odd element
    /// counts and twice that for even counts (the replicas alternate sign,
    /// so the signed response only repeats every second alias interval).
    pub fn lad_period(&self) -> f64 {
        let parity = 1 + (self.n_elements - 1) % 2;
        parity as f64 * self.wavelength / (2.0 * self.spacing)
    }

    /// Physical element positions in meters, `x_n = (-(N-1)/2 + n) d`.
    /// Antisymmetric about the origin.
    pub fn element_positions(&self) -> Vec<f64> {
        let half = (self.n_elements as f64 - 1.0) / 2.0;
        (0..self.n_elements).map(|n| (n as f64 - half) * self.spacing).collect()
    }

    /// Element positions on the AAL axis, `y_n = 2 x_n / lambda`.
    pub fn aal_positions(&self) -> Vec<f64> {
        let scale = 2.0 / self.wavelength;
        self.element_positions().into_iter().map(|x| x * scale).collect()
    }

    /// Sum co-array of a co-located transmit/receive pair of this array: the
    /// set of pairwise position sums, which for a ULA is again a ULA with
    /// `2N - 1` elements at the same spacing.
    pub fn sum_coarray(&self) -> UlaGeometry {
        UlaGeometry {
            n_elements: 2 * self.n_elements - 1,
            spacing: self.spacing,
            wavelength: self.wavelength,
        }
    }

    /// Contiguous sub-array with `n` elements (same spacing and wavelength).
    pub fn subarray(&self, n: usize) -> Result<UlaGeometry, SaraError> {
        UlaGeometry::new(n, self.spacing, self.wavelength)
    }
}

/// Uniform rectangular array as a pair of orthogonal ULAs sharing one
/// wavelength. The horizontal axis resolves azimuth, the vertical elevation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UraGeometry {
    horizontal: UlaGeometry,
    vertical: UlaGeometry,
}

impl UraGeometry {
    pub fn new(horizontal: UlaGeometry, vertical: UlaGeometry) -> Result<Self, SaraError> {
        if horizontal.wavelength() != vertical.wavelength() {
            return Err(SaraError::InvalidGeometry(format!(
                "sub-array wavelengths differ: {} vs {}",
                horizontal.wavelength(),
                vertical.wavelength()
            )));
        }
        Ok(Self { horizontal, vertical })
    }

    /// Square URA with identical spacing on both axes.
    pub fn square(n: usize, spacing: f64, wavelength: f64) -> Result<Self, SaraError> {
        let ula = UlaGeometry::new(n, spacing, wavelength)?;
        Self::new(ula, ula)
    }

    pub fn horizontal(&self) -> &UlaGeometry {
        &self.horizontal
    }

    pub fn vertical(&self) -> &UlaGeometry {
        &self.vertical
    }

    pub fn wavelength(&self) -> f64 {
        self.horizontal.wavelength()
    }
}

/// LAD of an incident angle, `eta = sin(theta) / 2`.
///
/// Total on the reals; angles behind the array (`|theta| > pi/2`) fold onto
/// the same LAD as their mirror image, matching the symmetric response of a
/// linear array around its axis.
pub fn lad_from_angle(theta: f64) -> Lad {
    theta.sin() / 2.0
}

/// Angle for a physical LAD value, `theta = asin(2 eta)`.
pub fn angle_from_lad(eta: Lad) -> Result<f64, SaraError> {
    if eta.abs() > 0.5 {
        return Err(SaraError::NonPhysicalLad(eta));
    }
    Ok((2.0 * eta).asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn positions_n8_half_wavelength() {
        let lambda = 10.71e-3;
        let g = UlaGeometry::half_wavelength(8, lambda).unwrap();
        let x = g.element_positions();
        assert_relative_eq!(x[0], -3.5 * g.spacing(), max_relative = 1e-15);
        assert_relative_eq!(x[7], 3.5 * g.spacing(), max_relative = 1e-15);
    }

    #[test]
    fn positions_small_arrays() {
        let g = UlaGeometry::new(2, 1.0, 1.0).unwrap();
        assert_eq!(g.element_positions(), vec![-0.5, 0.5]);
        let g = UlaGeometry::new(3, 2.0, 1.0).unwrap();
        assert_eq!(g.element_positions(), vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn positions_mean_is_zero() {
        let g = UlaGeometry::new(8, 0.5, 1.0).unwrap();
        let mean: f64 = g.element_positions().iter().sum::<f64>() / 8.0;
        assert_eq!(mean, 0.0);
    }

    #[test]
    fn aal_positions_examples() {
        let g = UlaGeometry::half_wavelength(8, 1.0).unwrap();
        let y = g.aal_positions();
        assert_abs_diff_eq!(y[0], -3.5, epsilon = 1e-12);
        assert_abs_diff_eq!(y[7], 3.5, epsilon = 1e-12);
        for w in y.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], 1.0, epsilon = 1e-12);
        }

        let g = UlaGeometry::new(2, 0.25, 1.0).unwrap();
        assert_eq!(g.aal_positions(), vec![-0.25, 0.25]);

        let g = UlaGeometry::new(3, 1.0, 1.0).unwrap();
        assert_eq!(g.aal_positions(), vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn lad_angle_examples() {
        assert_abs_diff_eq!(lad_from_angle(FRAC_PI_2), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(lad_from_angle(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lad_from_angle(FRAC_PI_3), 3.0f64.sqrt() / 4.0, epsilon = 1e-15);

        assert_abs_diff_eq!(angle_from_lad(0.5).unwrap(), FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(angle_from_lad(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(matches!(angle_from_lad(0.6), Err(SaraError::NonPhysicalLad(_))));
    }

    #[test]
    fn back_lobe_folds_to_same_lad() {
        let theta = 0.3;
        assert_abs_diff_eq!(lad_from_angle(PI - theta), lad_from_angle(theta), epsilon = 1e-15);
    }

    #[test]
    fn sum_coarray_sizes() {
        let g = UlaGeometry::half_wavelength(16, 1.0).unwrap();
        assert_eq!(g.sum_coarray().n_elements(), 31);
        let g = UlaGeometry::new(2, 1.0, 1.0).unwrap();
        assert_eq!(g.sum_coarray().n_elements(), 3);
    }

    #[test]
    fn sum_coarray_matches_pairwise_position_sums() {
        let g = UlaGeometry::half_wavelength(8, 1.0).unwrap();
        let x = g.element_positions();
        let mut sums: Vec<f64> = x
            .iter()
            .flat_map(|&a| x.iter().map(move |&b| a + b))
            .collect();
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sums.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

        let co = g.sum_coarray();
        let expected = co.element_positions();
        assert_eq!(sums.len(), co.n_elements());
        for (s, e) in sums.iter().zip(&expected) {
            assert_abs_diff_eq!(s, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn geometry_validation() {
        assert!(UlaGeometry::new(1, 0.5, 1.0).is_err());
        assert!(UlaGeometry::new(4, 0.0, 1.0).is_err());
        assert!(UlaGeometry::new(4, 0.5, -1.0).is_err());
        let a = UlaGeometry::new(4, 0.5, 1.0).unwrap();
        let b = UlaGeometry::new(4, 0.5, 2.0).unwrap();
        assert!(UraGeometry::new(a, b).is_err());
    }

    #[test]
    fn aal_condition_and_period() {
        let ok = UlaGeometry::new(8, 0.5, 1.0).unwrap();
        assert!(ok.aal_sampling_ok());
        let sparse = UlaGeometry::new(8, 0.6, 1.0).unwrap();
        assert!(!sparse.aal_sampling_ok());

        // Period doubles exactly for even element counts.
        let even = UlaGeometry::new(8, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(even.lad_period(), 2.0, epsilon = 1e-15);
        let odd = UlaGeometry::new(7, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(odd.lad_period(), 1.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn positions_are_antisymmetric(n in 2usize..64, d in 1e-4f64..1.0) {
            let g = UlaGeometry::new(n, d, 1.0).unwrap();
            let x = g.element_positions();
            for i in 0..n {
                prop_assert_eq!(x[i], -x[n - 1 - i]);
            }
        }

        #[test]
        fn aal_gap_is_uniform(n in 2usize..64, d in 1e-4f64..1.0, lambda in 1e-3f64..1.0) {
            let g = UlaGeometry::new(n, d, lambda).unwrap();
            let y = g.aal_positions();
            let gap = g.aal_gap();
            for w in y.windows(2) {
                prop_assert!((w[1] - w[0] - gap).abs() <= 1e-12 * gap.max(1.0));
            }
        }

        #[test]
        fn lad_angle_round_trip(eta in -0.5f64..=0.5) {
            let theta = angle_from_lad(eta).unwrap();
            prop_assert!((lad_from_angle(theta) - eta).abs() < 1e-12);
        }

        #[test]
        fn coarray_composition(n in 2usize..40) {
            let g = UlaGeometry::new(n, 0.5, 1.0).unwrap();
            prop_assert_eq!(g.sum_coarray().sum_coarray().n_elements(), 4 * n - 3);
        }

        #[test]
        fn period_parity(n in 2usize..40, d in 1e-3f64..1.0) {
            let g = UlaGeometry::new(n, d, 1.0).unwrap();
            let base = 1.0 / (2.0 * d);
            let expected = if n % 2 == 0 { 2.0 * base } else { base };
            prop_assert!((g.lad_period() - expected).abs() < 1e-12 * expected);
        }
    }
}
