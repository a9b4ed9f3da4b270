//! Comparison of an approximate Bloch wave with a reference vector.

use crate::types::{even_norm_sq, BlochWave};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveComparison {
    /// max |B_approx - B_ref| over available beams, divided by max |B_ref|.
    pub max_dev_over_peak: f64,
    pub rms_dev: f64,
    /// Sign changes counted over beams where |B_ref| >= 1e-3 of its peak.
    pub crossings_approx: usize,
    pub crossings_reference: usize,
    /// Discrete norm of the approximation before any renormalisation.
    pub raw_norm_sq: f64,
}

fn crossings(v: &[f64], keep: &[bool]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for (x, &k) in v.iter().zip(keep) {
        if !k || *x == 0.0 {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            count += 1;
        }
        last = *x;
    }
    count
}

/// Compares `approx` with `reference` (same grid, reference unit-normalised).
///
/// With `renormalize` the approximation is scaled to unit discrete norm first; the overall
/// sign is always aligned with the reference.
pub fn compare_waves(approx: &BlochWave, reference: &[f64], renormalize: bool) -> WaveComparison {
    let n = (approx.n_max() + 1).min(reference.len());
    let mut a: Vec<f64> = (0..n).map(|k| approx.amplitude(k).unwrap_or(0.0)).collect();
    let avail: Vec<bool> = (0..n).map(|k| !approx.is_guarded(k)).collect();
    let raw = even_norm_sq(&a);
    if renormalize && raw > 0.0 {
        let s = raw.sqrt();
        a.iter_mut().for_each(|x| *x /= s);
    }
    let dot: f64 = (0..n)
        .filter(|&k| avail[k])
        .map(|k| if k == 0 { 1.0 } else { 2.0 } * a[k] * reference[k])
        .sum();
    if dot < 0.0 {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    let peak = reference.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut max_dev: f64 = 0.0;
    let mut ss = 0.0;
    let mut cnt = 0usize;
    for k in 0..n {
        if !avail[k] {
            continue;
        }
        let d = (a[k] - reference[k]).abs();
        max_dev = max_dev.max(d);
        ss += d * d;
        cnt += 1;
    }
    for r in reference.iter().skip(n) {
        max_dev = max_dev.max(r.abs());
    }
    let keep: Vec<bool> = (0..n)
        .map(|k| avail[k] && reference[k].abs() >= 1e-3 * peak)
        .collect();
    WaveComparison {
        max_dev_over_peak: max_dev / peak,
        rms_dev: (ss / cnt.max(1) as f64).sqrt(),
        crossings_approx: crossings(&a, &keep),
        crossings_reference: crossings(&reference[..n], &keep),
        raw_norm_sq: raw,
    }
}
