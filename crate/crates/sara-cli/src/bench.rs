//! Wall-clock comparison of the reconstruction routes at a fixed output
//! size. Absolute numbers are machine-dependent; the interesting quantity is
//! how each route scales with the array order once the output is pinned.

use std::hint::black_box;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use sara_core::plan::lad_uniform_plan;
use sara_core::reconstruction::{cubic_baseline, reconstruct_scaled, LadGrid, Method};
use sara_core::rng::trial_rng;
use sara_core::signal::{ScanEntry, ScanRecord};
use sara_core::{SamplingPlan, SaraError, UlaGeometry};

use crate::config::MethodKind;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub order: usize,
    pub method: MethodKind,
    pub output_len: usize,
    pub reps: usize,
    pub mean_ns: f64,
}

pub fn bench_csv_header() -> &'static str {
    "order,method,output_len,reps,mean_ns"
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.order,
            self.method.as_str(),
            self.output_len,
            self.reps,
            self.mean_ns
        )
    }
}

fn random_record(plan: &SamplingPlan, seed: u64) -> ScanRecord {
    let mut rng = trial_rng(seed, 13, 0);
    let entries = plan
        .points
        .iter()
        .enumerate()
        .map(|(i, &p)| ScanEntry {
            position: p,
            value: Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            time: i as f64,
        })
        .collect();
    ScanRecord { entries, scan_period: 1.0, domain: plan.domain }
}

fn time_reps<F: FnMut()>(reps: usize, mut op: F) -> f64 {
    for _ in 0..reps.min(10) {
        op();
    }
    let start = Instant::now();
    for _ in 0..reps {
        op();
    }
    start.elapsed().as_nanos() as f64 / reps as f64
}

/// Time LR, AR and CUBIC per reconstruction for each order in `orders`, with
/// the output size held at `output_len` (the upsampling factor adapts).
/// Kernel vectors and spectra are precomputed, matching a scan loop that
/// initializes them once.
pub fn run_benchmark(
    orders: &[usize],
    output_len: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, SaraError> {
    let mut rows = Vec::new();
    for &order in orders {
        if output_len % order != 0 {
            return Err(SaraError::ConfigError(format!(
                "output size {output_len} is not a multiple of order {order}"
            )));
        }
        let upsample = output_len / order;
        let g = UlaGeometry::half_wavelength(order, 1.0)?;
        let plan = lad_uniform_plan(&g);
        let grid = LadGrid::from_plan(&plan, upsample)?;
        let record = random_record(&plan, seed.wrapping_add(order as u64));

        // Warm the kernel caches outside the timed region.
        reconstruct_scaled(&record, &grid, Method::Lr)?;
        reconstruct_scaled(&record, &grid, Method::Ar)?;

        for (method, kind) in [
            (Some(Method::Lr), MethodKind::SaraLr),
            (Some(Method::Ar), MethodKind::SaraAr),
            (None, MethodKind::Cubic),
        ] {
            let mean_ns = match method {
                Some(m) => time_reps(reps, || {
                    black_box(reconstruct_scaled(black_box(&record), &grid, m).unwrap());
                }),
                None => time_reps(reps, || {
                    black_box(cubic_baseline(black_box(&record), &grid).unwrap());
                }),
            };
            rows.push(BenchRow { order, method: kind, output_len, reps, mean_ns });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_orders_empty_rows() {
        let rows = run_benchmark(&[], 256, 10, 1).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn produces_three_rows_per_order() {
        let rows = run_benchmark(&[16, 32], 256, 5, 1).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.mean_ns > 0.0));
        assert!(rows.iter().all(|r| r.output_len == 256));
    }

    #[test]
    fn rejects_non_divisible_output() {
        assert!(run_benchmark(&[31], 256, 5, 1).is_err());
    }
}
