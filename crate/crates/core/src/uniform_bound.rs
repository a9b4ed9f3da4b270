//! Uniform single-well Bloch waves: the wave is mapped onto a parabolic-cylinder function
//! through sigma(y), with the amplitude substitution that keeps it finite at the turning
//! point.

use crate::error::{Error, Result};
use crate::numerics::{brent, expand_upper};
use crate::specialfn::scaled_pcf;
use crate::types::BlochWave;
use crate::wkb_core::{action_s0, half_well_action, normalization_constant, outer_turning_point};
use std::f64::consts::PI;

/// t = -(4/pi) sqrt(Lambda) S_0(y_+, 0, beta).
pub fn t_of_beta(lambda: f64, beta: f64) -> Result<f64> {
    if !(beta > -1.0) || beta >= 1.0 {
        return Err(Error::Domain(format!(
            "t(beta) needs beta in (-1, 1), got {beta}"
        )));
    }
    Ok(4.0 / PI * lambda.sqrt() * half_well_action(beta)?)
}

/// Right side of the mapping relation inside the well, as a function of sigma in [0, sqrt t].
pub fn well_phase(t: f64, sigma: f64) -> f64 {
    let tau = (sigma / t.sqrt()).clamp(-1.0, 1.0);
    0.5 * t * (tau.asin() + tau * (1.0 - tau * tau).sqrt() - 0.5 * PI)
}

/// Right side of the continued relation beyond the turning point, sigma >= sqrt t.
pub fn well_tail_phase(t: f64, sigma: f64) -> f64 {
    let tau = (sigma / t.sqrt()).max(1.0);
    0.5 * t * (tau * (tau * tau - 1.0).sqrt() - tau.acosh())
}

/// Mapping between the Mathieu variable y and the comparison-equation variable sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellMapping {
    pub lambda: f64,
    pub beta: f64,
    pub t: f64,
}

impl WellMapping {
    pub fn new(lambda: f64, beta: f64, t: f64) -> Self {
        WellMapping { lambda, beta, t }
    }

    /// sigma(y), monotone, with sigma(0) = 0 and sigma(y_+) = sqrt t.
    pub fn sigma(&self, y: f64) -> Result<f64> {
        map_sigma(y, self)
    }

    /// Residual of the defining relation at (y, sigma).
    pub fn residual(&self, y: f64, sigma: f64) -> Result<f64> {
        let s = action_s0(y, self.beta)?;
        let sl = self.lambda.sqrt();
        Ok(if s.im == 0.0 && sigma <= self.t.sqrt() {
            sl * s.re - well_phase(self.t, sigma)
        } else {
            sl * s.im - well_tail_phase(self.t, sigma)
        })
    }
}

pub fn map_sigma(y: f64, m: &WellMapping) -> Result<f64> {
    let yp = outer_turning_point(m.beta);
    let rt = m.t.sqrt();
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == yp {
        return Ok(rt);
    }
    let s = action_s0(y, m.beta)?;
    let sl = m.lambda.sqrt();
    if y < yp {
        let lhs = sl * s.re;
        brent(|sg| well_phase(m.t, sg) - lhs, 0.0, rt, 1e-13)
    } else {
        let lhs = sl * s.im;
        let f = |sg: f64| well_tail_phase(m.t, sg) - lhs;
        let (a, b) = expand_upper(f, rt, rt * 1.5 + 1.0, 1e8)?;
        brent(f, a, b, 1e-13)
    }
}

/// Limit of (t - sigma^2) / (1 - (y^2 - beta)^2) at y = y_+.
pub fn turning_point_ratio(lambda: f64, beta: f64, t: f64) -> f64 {
    let yp = outer_turning_point(beta);
    (lambda * t / (4.0 * yp * yp)).cbrt()
}

/// Hermite below this order, Airy-type expansion above.
pub const HERMITE_MAX_J: usize = crate::specialfn::pcf::HERMITE_MAX_ORDER;

/// Uniform Bloch wave for the even index j at its quantised beta, on n = 0..=n_max.
///
/// The tail beyond the outer turning point is continued through the imaginary action and
/// cut to zero once it falls below 1e-14 of the peak.
pub fn uniform_eigenvector(lambda: f64, j: usize, beta: f64, n_max: usize) -> Result<BlochWave> {
    let t = 2.0 * j as f64 + 1.0;
    let tb = t_of_beta(lambda, beta)?;
    if (tb - t).abs() > 1e-6 * t {
        return Err(Error::Domain(format!(
            "beta = {beta} is not the quantised value for j = {j} (t = {tb}, expected {t})"
        )));
    }
    let map = WellMapping::new(lambda, beta, t);
    let norm = normalization_constant(lambda, beta)?;
    let pref = 0.5 * norm * 2f64.powf(0.25);
    let yp = outer_turning_point(beta);
    let sl = lambda.sqrt();
    let mut amps = vec![0.0; n_max + 1];
    let mut peak: f64 = 0.0;
    for n in 0..=n_max {
        let y = n as f64 / sl;
        let sigma = map.sigma(y)?;
        let ratio = if (y - yp).abs() < 1e-9 * yp.max(1.0) {
            turning_point_ratio(lambda, beta, t)
        } else {
            let p1sq = 1.0 - (y * y - beta).powi(2);
            (t - sigma * sigma) / p1sq
        };
        let v = pref * ratio.powf(0.25) * scaled_pcf(j, -sigma);
        amps[n] = v;
        peak = peak.max(v.abs());
        if y > yp && v.abs() < 1e-14 * peak {
            break;
        }
    }
    Ok(BlochWave::new(lambda, beta, amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wkb_core::bohr_sommerfeld_eigenvalue;

    #[test]
    fn t_is_odd_integer_at_bohr_sommerfeld_roots() {
        for j in [0, 10, 152, 200] {
            let b = bohr_sommerfeld_eigenvalue(12500.0, j).unwrap();
            let t = t_of_beta(12500.0, b).unwrap();
            assert!((t - (2 * j + 1) as f64).abs() < 1e-8, "j={j}: t={t}");
        }
        assert!(t_of_beta(12500.0, -1.0 + 1e-12).unwrap() < 1e-3);
    }

    #[test]
    fn mapping_end_points_and_residual() {
        let lambda = 12500.0;
        let b = bohr_sommerfeld_eigenvalue(lambda, 110).unwrap();
        let m = WellMapping::new(lambda, b, 221.0);
        let yp = outer_turning_point(b);
        assert_eq!(m.sigma(0.0).unwrap(), 0.0);
        assert_eq!(m.sigma(yp).unwrap(), 221f64.sqrt());
        for y in [0.5 * yp, 0.9 * yp, 1.05 * yp] {
            let s = m.sigma(y).unwrap();
            assert!(m.residual(y, s).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn turning_point_ratio_is_the_limit() {
        let lambda = 12500.0;
        let b = bohr_sommerfeld_eigenvalue(lambda, 8).unwrap();
        let m = WellMapping::new(lambda, b, 17.0);
        let yp = outer_turning_point(b);
        let y = yp - 1e-6;
        let s = m.sigma(y).unwrap();
        let r = (17.0 - s * s) / (1.0 - (y * y - b).powi(2));
        assert!((r / turning_point_ratio(lambda, b, 17.0) - 1.0).abs() < 1e-4);
    }
}
