//! Angular sampling sets.
//!
//! The minimal loss-less set for an order-`N` array samples the LAD axis at
//! the array bandwidth: `N` points `n / B_N` with `-N/2 <= n < N/2`. The
//! other kinds cover the baselines and the reduced/extended scan budgets.

use serde::{Deserialize, Serialize};

use crate::error::SaraError;
use crate::geometry::{lad_from_angle, UlaGeometry};
use crate::Lad;

/// Axis a plan (and anything derived from it) lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Linear angular domain, `eta = sin(theta) / 2`.
    Lad,
    /// Plain incident angle in radians.
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    LadUniform,
    AngleUniform,
    Reduced,
    Extended,
}

/// An ordered set of directions to scan.
///
/// `points` are sorted ascending on the plan's native axis. `kernel_order` is
/// the Dirichlet order governing replicas during reconstruction; it equals
/// the point count for minimal plans but differs for reduced/extended ones,
/// so downstream code never re-infers it. Points flagged unscanned are grid
/// slots that receive no acquisition and reconstruct as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub points: Vec<f64>,
    pub kind: PlanKind,
    pub kernel_order: usize,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scanned: Option<Vec<bool>>,
}

/// Integer index set `{-K/2 <= n < K/2}`, the minimum set without replicas.
fn index_set(count: usize) -> impl Iterator<Item = i64> {
    let k = count as i64;
    let start = if k % 2 == 0 { -(k / 2) } else { -((k - 1) / 2) };
    (0..k).map(move |i| start + i)
}

impl SamplingPlan {
    /// Number of grid slots (including unscanned ones).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Spacing between adjacent grid points on the native axis.
    pub fn step(&self) -> f64 {
        if self.points.len() < 2 {
            return 0.0;
        }
        (self.points[self.points.len() - 1] - self.points[0]) / (self.points.len() - 1) as f64
    }

    /// Whether grid slot `i` is actually acquired.
    pub fn is_scanned(&self, i: usize) -> bool {
        self.scanned.as_ref().map_or(true, |m| m[i])
    }

    pub fn n_scanned(&self) -> usize {
        match &self.scanned {
            Some(m) => m.iter().filter(|&&s| s).count(),
            None => self.points.len(),
        }
    }

    /// Plan points converted to LAD (identity for LAD-domain plans).
    pub fn lad_points(&self) -> Vec<Lad> {
        match self.domain {
            Domain::Lad => self.points.clone(),
            Domain::Angle => self.points.iter().map(|&t| lad_from_angle(t)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, SaraError> {
        serde_json::from_str(s).map_err(|e| SaraError::PlanError(e.to_string()))
    }
}

/// Minimal loss-less LAD sampling set for `g`: `N` points at `n / B_N`.
///
/// For even `N` the set is asymmetric (it contains `-N/(2 B_N)` but not the
/// positive counterpart); for odd `N` it is symmetric about boresight.
pub fn lad_uniform_plan(g: &UlaGeometry) -> SamplingPlan {
    let b = g.lad_bandwidth();
    let points = index_set(g.n_elements()).map(|n| n as f64 / b).collect();
    SamplingPlan {
        points,
        kind: PlanKind::LadUniform,
        kernel_order: g.n_elements(),
        domain: Domain::Lad,
        scanned: None,
    }
}

/// Uniform sampling of the angular axis with `n_scan` directions.
///
/// Spacing follows `theta = n pi / N` with `n_scan = 2N - 1`, generalized to
/// `2 pi / (n_scan + 1)`; even counts are offset by half a step so the set
/// stays symmetric (boresight is a sample point only for odd counts).
/// Reconstruction for these plans runs on the angle axis.
pub fn angle_uniform_plan(n_scan: usize) -> Result<SamplingPlan, SaraError> {
    if n_scan < 2 {
        return Err(SaraError::PlanError(format!("need at least 2 scans, got {n_scan}")));
    }
    let step = 2.0 * std::f64::consts::PI / (n_scan as f64 + 1.0);
    let offset = if n_scan % 2 == 0 { 0.5 } else { 0.0 };
    let points = index_set(n_scan).map(|n| (n as f64 + offset) * step).collect();
    Ok(SamplingPlan {
        points,
        kind: PlanKind::AngleUniform,
        kernel_order: n_scan,
        domain: Domain::Angle,
        scanned: None,
    })
}

/// Sampling plan when only `n_avail < N` acquisitions can be spent.
///
/// With a region of interest, the full-bandwidth grid is kept and only the
/// `n_avail` points nearest to (or inside) `roi` are scanned; the rest are
/// zero-filled at reconstruction, trading energy for preserved resolution.
/// Without a region of interest, a contiguous sub-array of `n_avail`
/// elements is assumed instead, lowering the kernel order (and resolution)
/// while covering the full aliasing period.
pub fn reduced_plan(
    g: &UlaGeometry,
    n_avail: usize,
    roi: Option<(Lad, Lad)>,
) -> Result<SamplingPlan, SaraError> {
    if n_avail == 0 {
        return Err(SaraError::PlanError("no acquisitions available".into()));
    }
    if n_avail >= g.n_elements() {
        return Err(SaraError::PlanError(format!(
            "reduced plan needs n_avail < N, got {n_avail} >= {}",
            g.n_elements()
        )));
    }
    match roi {
        Some((lo, hi)) => {
            if !(lo < hi) {
                return Err(SaraError::PlanError(format!("empty roi [{lo}, {hi})")));
            }
            let full = lad_uniform_plan(g);
            // Distance to the roi (zero inside), then grid order as tie-break.
            let mut ranked: Vec<(usize, f64)> = full
                .points
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let dist = if p < lo {
                        lo - p
                    } else if p > hi {
                        p - hi
                    } else {
                        0.0
                    };
                    (i, dist)
                })
                .collect();
            ranked.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
            let mut scanned = vec![false; full.points.len()];
            for &(i, _) in ranked.iter().take(n_avail) {
                scanned[i] = true;
            }
            Ok(SamplingPlan {
                points: full.points,
                kind: PlanKind::Reduced,
                kernel_order: g.n_elements(),
                domain: Domain::Lad,
                scanned: Some(scanned),
            })
        }
        None => {
            let sub = g.subarray(n_avail)?;
            let mut plan = lad_uniform_plan(&sub);
            plan.kind = PlanKind::Reduced;
            Ok(plan)
        }
    }
}

/// Plan with `n_scan > N` acquisitions on the finer grid `n / B_n_scan`.
///
/// The kernel order stays at `N`; reconstruction applies the `N / n_scan`
/// normalization to compensate for the denser sampling.
pub fn extended_plan(g: &UlaGeometry, n_scan: usize) -> Result<SamplingPlan, SaraError> {
    if n_scan <= g.n_elements() {
        return Err(SaraError::PlanError(format!(
            "extended plan needs n_scan > N, got {n_scan} <= {}",
            g.n_elements()
        )));
    }
    let b = g.aal_gap() * n_scan as f64;
    let points = index_set(n_scan).map(|n| n as f64 / b).collect();
    Ok(SamplingPlan {
        points,
        kind: PlanKind::Extended,
        kernel_order: g.n_elements(),
        domain: Domain::Lad,
        scanned: None,
    })
}

/// 2D sampling plan over a URA: cartesian product of the per-axis plans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan2d {
    pub azimuth: SamplingPlan,
    pub elevation: SamplingPlan,
}

impl SamplingPlan2d {
    /// All (azimuth, elevation) pairs, elevation-major.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.elevation
            .points
            .iter()
            .flat_map(|&el| self.azimuth.points.iter().map(move |&az| (az, el)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.azimuth.len() * self.elevation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.azimuth.is_empty() || self.elevation.is_empty()
    }
}

/// Minimal 2D plan for a URA: `N x M` directions from the per-axis sets.
pub fn ura_plan(g2: &crate::geometry::UraGeometry) -> SamplingPlan2d {
    SamplingPlan2d {
        azimuth: lad_uniform_plan(g2.horizontal()),
        elevation: lad_uniform_plan(g2.vertical()),
    }
}

/// Acquisitions needed to collect `n_points` scans with `chains` parallel
/// receive chains: `ceil(n_points / chains)`.
pub fn acquisitions_required(n_points: usize, chains: usize) -> usize {
    assert!(chains >= 1, "need at least one chain");
    n_points.div_ceil(chains)
}
