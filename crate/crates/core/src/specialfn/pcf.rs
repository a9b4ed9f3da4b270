//! Parabolic cylinder functions D_j at integer order, scaled by (2e/t)^{t/4} with t = 2j+1.
//!
//! The scaling is the prefactor of the uniform Bloch-wave construction; carrying it inside
//! keeps every value O(1) for any j. Low orders use the weighted Hermite recurrence, higher
//! orders the uniform Airy-type expansion in the large parameter mu = sqrt(t), keeping the
//! first correction terms of both the Ai and Ai' series.

use super::airy::airy_pair;
use super::hermite::weighted_hermite_log;
use std::f64::consts::PI;

/// Order above which the Airy-type expansion replaces the Hermite recurrence.
pub const HERMITE_MAX_ORDER: usize = 20;

fn log_scale(t: f64) -> f64 {
    0.25 * t * (2.0f64.ln() + 1.0 - t.ln())
}

/// (2e/t)^{t/4} D_j(sigma sqrt2) via the Hermite recurrence.
pub fn scaled_pcf_hermite(j: usize, sigma: f64) -> f64 {
    let t = 2.0 * j as f64 + 1.0;
    let (s, l) = weighted_hermite_log(j, sigma);
    if s == 0.0 {
        0.0
    } else {
        s * (l + log_scale(t)).exp()
    }
}

/// Olver's variable zeta(tau) and phi(zeta) = (zeta / (tau^2 - 1))^{1/4}, tau >= 0.
pub fn olver_zeta(tau: f64) -> (f64, f64) {
    let u = tau - 1.0;
    let c = 2f64.powf(1.0 / 3.0);
    if u.abs() < 1e-3 {
        let z = c * u * (1.0 + u / 10.0 - 2.0 * u * u / 175.0);
        let ratio = c * (1.0 + u / 10.0 - 2.0 * u * u / 175.0) / (2.0 + u);
        return (z, ratio.powf(0.25));
    }
    olver_zeta_direct(tau)
}

fn olver_zeta_direct(tau: f64) -> (f64, f64) {
    let z = if tau < 1.0 {
        let r = 0.5 * (tau.acos() - tau * (1.0 - tau * tau).sqrt());
        -(1.5 * r).powf(2.0 / 3.0)
    } else {
        let r = 0.5 * (tau * (tau * tau - 1.0).sqrt() - tau.acosh());
        (1.5 * r).powf(2.0 / 3.0)
    };
    (z, (z / (tau * tau - 1.0)).powf(0.25))
}

fn b0_coefficient(tau: f64, z: f64, phi: f64) -> f64 {
    let u = tau - 1.0;
    if u.abs() < 0.05 {
        return 2f64.powf(1.0 / 3.0) * (-9.0 / 280.0 + 1033.0 * u / 67200.0);
    }
    let u1 = (tau.powi(3) - 6.0 * tau) / 24.0;
    -(5.0 / 48.0) / (z * z) - phi.powi(6) * u1 / (z * z)
}

/// (2e/t)^{t/4} D_j(sigma sqrt2) via the uniform Airy expansion.
pub fn scaled_pcf_airy(j: usize, sigma: f64) -> f64 {
    let t = 2.0 * j as f64 + 1.0;
    let mu = t.sqrt();
    let tau = sigma.abs() / mu;
    let (z, phi) = olver_zeta(tau);
    let arg = mu.powf(4.0 / 3.0) * z;
    let (ai, aip) = airy_pair(arg);
    let b0 = b0_coefficient(tau, z, phi);
    let pref = 2f64.powf(-0.25)
        * t.powf(-0.25)
        * 2.0
        * PI.sqrt()
        * mu.powf(1.0 / 3.0)
        * (1.0 - 1.0 / (24.0 * t));
    let v = pref * phi * (ai + aip * b0 / mu.powf(8.0 / 3.0));
    if sigma < 0.0 && j % 2 == 1 {
        -v
    } else {
        v
    }
}

/// (2e/t)^{t/4} D_j(sigma sqrt2), switching method at [`HERMITE_MAX_ORDER`].
pub fn scaled_pcf(j: usize, sigma: f64) -> f64 {
    if j <= HERMITE_MAX_ORDER {
        scaled_pcf_hermite(j, sigma)
    } else {
        scaled_pcf_airy(j, sigma)
    }
}

/// D_j(x) itself; overflows for very large j.
pub fn pcf_d(j: usize, x: f64) -> f64 {
    let t = 2.0 * j as f64 + 1.0;
    scaled_pcf(j, x / std::f64::consts::SQRT_2) * (-log_scale(t)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_rel_dev(j: usize) -> f64 {
        let t = 2.0 * j as f64 + 1.0;
        let mut peak: f64 = 0.0;
        let mut dev: f64 = 0.0;
        for i in 0..400 {
            let s = 1.3 * t.sqrt() * i as f64 / 399.0;
            let h = scaled_pcf_hermite(j, s);
            let a = scaled_pcf_airy(j, s);
            peak = peak.max(h.abs());
            dev = dev.max((h - a).abs());
        }
        dev / peak
    }

    #[test]
    fn airy_form_matches_hermite_in_overlap() {
        for j in [20, 24, 30] {
            assert!(max_rel_dev(j) < 1e-4, "j={j}: {}", max_rel_dev(j));
        }
        for j in [60, 100] {
            assert!(max_rel_dev(j) < 1e-5, "j={j}: {}", max_rel_dev(j));
        }
    }

    #[test]
    fn zeta_series_joins_direct_formula() {
        for tau in [1.0 - 0.99e-3, 1.0 + 0.99e-3] {
            let (z1, p1) = olver_zeta(tau);
            let (z2, p2) = olver_zeta_direct(tau);
            assert!(
                (z1 - z2).abs() < 1e-11 && (p1 - p2).abs() < 1e-11,
                "{z1} {z2} {p1} {p2}"
            );
        }
    }

    #[test]
    fn low_order_values() {
        // D_0(x) = e^{-x^2/4}, D_2(x) = (x^2 - 1) e^{-x^2/4}
        for x in [0.0, 1.0, 2.5] {
            assert!((pcf_d(0, x) - (-x * x / 4.0f64).exp()).abs() < 1e-14);
            assert!((pcf_d(2, x) - (x * x - 1.0) * (-x * x / 4.0f64).exp()).abs() < 1e-13);
        }
    }
}
