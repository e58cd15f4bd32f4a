//! Evaluation metrics: wrapped LAD errors, peak-amplitude RMSE, the
//! Cramer-Rao lower bound of single-tone LAD estimation, normalized 2D
//! reconstruction error, and false-alarm / missed-detection rates.

use num_complex::Complex64;

use crate::detection::DetectionReport;
use crate::error::SaraError;
use crate::reconstruction::LadResponse2d;
use crate::Lad;

/// Wrap a LAD difference into `[-0.5, 0.5)` (unit aliasing period).
pub fn wrap_lad(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

/// Magnitude of the wrapped LAD estimation error.
pub fn lad_error(eta: Lad, eta_hat: Lad) -> f64 {
    wrap_lad(eta - eta_hat).abs()
}

/// Root mean square of a sequence of errors.
pub fn rmse(errors: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = 0.0;
    let mut n = 0usize;
    for e in errors {
        acc += e * e;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        (acc / n as f64).sqrt()
    }
}

/// RMSE of complex peak-amplitude errors over `(true, estimated)` pairs.
pub fn peak_rmse(pairs: &[(Complex64, Complex64)]) -> Result<f64, SaraError> {
    if pairs.is_empty() {
        return Err(SaraError::MetricError("peak RMSE over empty sample set".into()));
    }
    let acc: f64 = pairs.iter().map(|(t, e)| (t - e).norm_sqr()).sum();
    Ok((acc / pairs.len() as f64).sqrt())
}

/// Cramer-Rao lower bound on the LAD estimate of a single unit tone observed
/// on `n` antennas with per-antenna noise standard deviation `sigma_n`
/// (half-wavelength spacing):
/// `sigma_n / (2 pi) * sqrt(6 / (N (N^2 - 1)))`.
///
/// Independent of the incoming angle: the LAD transform makes the problem a
/// plain frequency estimation on the element axis.
pub fn crlb(sigma_n: f64, n: usize) -> f64 {
    assert!(n >= 2, "CRLB needs at least two antennas");
    assert!(sigma_n > 0.0, "noise std must be positive");
    let nf = n as f64;
    sigma_n / (2.0 * std::f64::consts::PI) * (6.0 / (nf * (nf * nf - 1.0))).sqrt()
}

/// Normalized RMSE of a 2D reconstruction against a reference field:
/// `sqrt(sum |R - L|^2 / sum |L|^2)`.
pub fn normalized_rmse_2d(
    reconstruction: &LadResponse2d,
    reference: &LadResponse2d,
) -> Result<f64, SaraError> {
    if reconstruction.values.len() != reference.values.len() {
        return Err(SaraError::DimensionError {
            expected: reference.values.len(),
            got: reconstruction.values.len(),
        });
    }
    let denom: f64 = reference.values.iter().map(|v| v.norm_sqr()).sum();
    if denom <= 0.0 {
        return Err(SaraError::MetricError("zero reference field".into()));
    }
    let num: f64 = reconstruction
        .values
        .iter()
        .zip(&reference.values)
        .map(|(r, l)| (r - l).norm_sqr())
        .sum();
    Ok((num / denom).sqrt())
}

/// True scene and detector output of one Monte Carlo trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub true_lads: Vec<Lad>,
    pub true_amplitudes: Vec<Complex64>,
    pub detected: DetectionReport,
}

/// Greedy nearest match of estimates to truths within `match_radius`.
/// Returns matched `(truth index, estimate index, error)` triples.
fn match_peaks(outcome: &TrialOutcome, match_radius: f64) -> Vec<(usize, usize, f64)> {
    let mut candidates: Vec<(usize, usize, f64)> = Vec::new();
    for (ti, &t) in outcome.true_lads.iter().enumerate() {
        for (ei, e) in outcome.detected.peaks.iter().enumerate() {
            let err = lad_error(t, e.lad);
            if err <= match_radius {
                candidates.push((ti, ei, err));
            }
        }
    }
    candidates.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
    let mut truth_used = vec![false; outcome.true_lads.len()];
    let mut est_used = vec![false; outcome.detected.peaks.len()];
    let mut matched = Vec::new();
    for (ti, ei, err) in candidates {
        if !truth_used[ti] && !est_used[ei] {
            truth_used[ti] = true;
            est_used[ei] = true;
            matched.push((ti, ei, err));
        }
    }
    matched
}

/// False-alarm and missed-detection rates over a set of trials.
///
/// Unmatched estimates count as false alarms per experiment (the rate may
/// exceed one); unmatched truths count as misses relative to the total
/// number of targets.
pub fn fa_md_rates(outcomes: &[TrialOutcome], match_radius: f64) -> (f64, f64) {
    assert!(!outcomes.is_empty(), "need at least one trial");
    let mut false_alarms = 0usize;
    let mut misses = 0usize;
    let mut total_truths = 0usize;
    for o in outcomes {
        let matched = match_peaks(o, match_radius);
        false_alarms += o.detected.peaks.len() - matched.len();
        misses += o.true_lads.len() - matched.len();
        total_truths += o.true_lads.len();
    }
    let p_fa = false_alarms as f64 / outcomes.len() as f64;
    let p_md = if total_truths == 0 { 0.0 } else { misses as f64 / total_truths as f64 };
    (p_fa, p_md)
}

/// Multi-target LAD RMSE with the missed-detection substitution error.
///
/// Matched targets contribute their wrapped error, missed ones `miss_error`
/// (the maximum possible LAD for the scenario, e.g. `sin(theta_max) / 2`).
pub fn multi_target_lad_rmse(
    outcomes: &[TrialOutcome],
    match_radius: f64,
    miss_error: f64,
) -> f64 {
    let mut acc = 0.0;
    let mut n = 0usize;
    for o in outcomes {
        let matched = match_peaks(o, match_radius);
        for &(_, _, err) in &matched {
            acc += err * err;
            n += 1;
        }
        let missed = o.true_lads.len() - matched.len();
        acc += missed as f64 * miss_error * miss_error;
        n += missed;
    }
    if n == 0 {
        0.0
    } else {
        (acc / n as f64).sqrt()
    }
}
