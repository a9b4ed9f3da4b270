//! WKB machinery in the momentum variable y = n / sqrt(Lambda): the two momentum functions,
//! the action S_0, Bohr-Sommerfeld quantisation, the normalisation constant and the real
//! WKB Bloch wave.

use crate::error::{Error, Result};
use crate::numerics::{brent, integrate_sqrt_ends, integrate_sqrt_lower};
use crate::specialfn::{ellip_e_imag_amplitude, ellip_e_inc, ellip_k};
use crate::types::BlochWave;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

pub(crate) const ACTION_TOL: f64 = 1e-14;

/// arccos clamped to its real domain.
pub(crate) fn acos_c(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// arccosh clamped to its real domain.
pub(crate) fn acosh_c(x: f64) -> f64 {
    x.max(1.0).acosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momenta {
    /// sqrt(1 - (y^2 - beta)^2), the amplitude momentum.
    pub p1: f64,
    /// arccos(y^2 - beta), the phase momentum.
    pub p2: f64,
}

/// Momenta on the classically allowed set |y^2 - beta| <= 1.
pub fn momenta(y: f64, beta: f64) -> Result<Momenta> {
    let x = y * y - beta;
    if x.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "y = {y} is classically forbidden at beta = {beta}"
        )));
    }
    Ok(Momenta {
        p1: (1.0 - x * x).sqrt(),
        p2: x.acos(),
    })
}

/// y_+ = sqrt(1 + beta).
pub fn outer_turning_point(beta: f64) -> f64 {
    (1.0 + beta).max(0.0).sqrt()
}

fn check_action_domain(y: f64, beta: f64) -> Result<()> {
    if !(beta > -1.0) || !beta.is_finite() || !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "action undefined at y = {y}, beta = {beta}"
        )));
    }
    if beta > 1.0 && y * y < beta - 1.0 {
        return Err(Error::Domain(format!(
            "y = {y} lies inside the central barrier at beta = {beta}"
        )));
    }
    Ok(())
}

/// S_0(y_+, y, beta): `-int_y^{y_+} arccos(u^2 - beta) du` for y <= y_+, and
/// `+i int_{y_+}^y arccosh(u^2 - beta) du` beyond. Adaptive quadrature.
pub fn action_s0(y: f64, beta: f64) -> Result<Complex64> {
    check_action_domain(y, beta)?;
    let yp = outer_turning_point(beta);
    if y <= yp {
        let v = integrate_sqrt_ends(|u| acos_c(u * u - beta), y, yp, ACTION_TOL)?;
        Ok(Complex64::new(-v, 0.0))
    } else {
        let v = integrate_sqrt_lower(|u| acosh_c(u * u - beta), yp, y, ACTION_TOL)?;
        Ok(Complex64::new(0.0, v))
    }
}

/// The elliptic closed form `y arccos(y^2-beta) - 2 sqrt(1+beta) E(arccos(y^2-beta)/2 | 2/(1+beta))`,
/// continued beyond y_+ with arccos -> i arccosh.
pub fn action_s0_closed_form(y: f64, beta: f64) -> Result<Complex64> {
    check_action_domain(y, beta)?;
    let x = y * y - beta;
    let m = 2.0 / (1.0 + beta);
    let c = 2.0 * (1.0 + beta).sqrt();
    if x <= 1.0 {
        let a = acos_c(x);
        let e = ellip_e_inc(0.5 * a, m)?;
        Ok(Complex64::new(y * a, 0.0) - c * e)
    } else {
        let a = x.acosh();
        let e = ellip_e_imag_amplitude(0.5 * a, m)?;
        Ok(Complex64::new(0.0, y * a) - c * e)
    }
}

/// |S_0(y_+, 0, beta)| = int_0^{y_+} arccos(u^2 - beta) du, for beta in (-1, 1].
pub fn half_well_action(beta: f64) -> Result<f64> {
    if !(beta > -1.0) {
        return Ok(0.0);
    }
    if beta > 1.0 {
        return Err(Error::Domain(format!("no single well at beta = {beta}")));
    }
    Ok(-action_s0(0.0, beta)?.re)
}

/// Cached actions for one (Lambda, beta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionTable {
    pub beta: f64,
    pub lambda: f64,
    pub s0_half_well: f64,
    pub turning_point_outer: f64,
    pub quadrature_tol: f64,
}

impl ActionTable {
    pub fn new(lambda: f64, beta: f64) -> Result<Self> {
        Ok(ActionTable {
            beta,
            lambda,
            s0_half_well: -half_well_action(beta)?,
            turning_point_outer: outer_turning_point(beta),
            quadrature_tol: ACTION_TOL,
        })
    }
}

/// 2 sqrt(Lambda) |S_0(y_+, 0, beta)|.
pub fn bohr_sommerfeld_phase(lambda: f64, beta: f64) -> Result<f64> {
    Ok(2.0 * lambda.sqrt() * half_well_action(beta)?)
}

/// Root of 2 sqrt(Lambda) |S_0| = (q + 1/2) pi for real q >= 0.
pub fn bohr_sommerfeld_level(lambda: f64, q: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(q >= 0.0) {
        return Err(Error::Domain(format!(
            "invalid Lambda = {lambda} or level {q}"
        )));
    }
    let target = (q + 0.5) * PI;
    let f = |b: f64| bohr_sommerfeld_phase(lambda, b).unwrap_or(f64::NAN) - target;
    if f(1.0) < 0.0 {
        return Err(Error::NoRoot(format!(
            "no Bohr-Sommerfeld root below the separatrix for level {q}"
        )));
    }
    // harmonic estimate, then geometric bracket growth inside (-1, 1]
    let guess = (-1.0 + (2.0 * q + 1.0) / (2.0 * lambda).sqrt()).clamp(-1.0, 1.0);
    let mut w = 4.0 / (2.0 * lambda).sqrt();
    let (mut lo, mut hi);
    loop {
        lo = (guess - w).max(-1.0);
        hi = (guess + w).min(1.0);
        if f(lo) <= 0.0 && f(hi) >= 0.0 {
            break;
        }
        w *= 2.0;
    }
    brent(f, lo, hi, 1e-13)
}

/// Bohr-Sommerfeld eigenvalue for even index j.
pub fn bohr_sommerfeld_eigenvalue(lambda: f64, j: usize) -> Result<f64> {
    if j % 2 != 0 {
        return Err(Error::Usage(format!(
            "only even states are excited; got j = {j}"
        )));
    }
    bohr_sommerfeld_level(lambda, j as f64)
}

/// Largest j with a Bohr-Sommerfeld root below the separatrix.
pub fn j_max(lambda: f64) -> usize {
    let q = bohr_sommerfeld_phase(lambda, 1.0).unwrap_or(0.0) / PI - 0.5;
    if q < 0.0 {
        0
    } else {
        q.floor() as usize
    }
}

/// Normalisation constant N = (sqrt2 / (sqrt(Lambda) K((1+beta)/2)))^{1/2}.
pub fn normalization_constant(lambda: f64, beta: f64) -> Result<f64> {
    if !(beta > -1.0) || beta >= 1.0 {
        return Err(Error::Domain(format!(
            "normalisation constant undefined at beta = {beta}"
        )));
    }
    let k = ellip_k(0.5 * (1.0 + beta))?;
    Ok((std::f64::consts::SQRT_2 / (lambda.sqrt() * k)).sqrt())
}

/// Default guard-band half width around turning points, in beam spacings.
pub const DEFAULT_GUARD_BEAMS: f64 = 3.0;

/// Real WKB Bloch wave on n = 0..=n_max. Beams within `guard_beams` spacings of the
/// turning point, and beams beyond it, are marked unavailable.
pub fn wkb_eigenvector(
    lambda: f64,
    beta: f64,
    n_max: usize,
    guard_beams: f64,
) -> Result<BlochWave> {
    let norm = normalization_constant(lambda, beta)?;
    let sl = lambda.sqrt();
    let yp = outer_turning_point(beta);
    let dy = 1.0 / sl;
    let mut amps = vec![0.0; n_max + 1];
    let mut guarded = vec![false; n_max + 1];
    for n in 0..=n_max {
        let y = n as f64 * dy;
        if y > yp - guard_beams * dy {
            guarded[n] = true;
            continue;
        }
        let mo = momenta(y, beta)?;
        let s = action_s0(y, beta)?.re;
        amps[n] = norm * mo.p1.powf(-0.5) * (sl * s + FRAC_PI_4).cos();
    }
    Ok(BlochWave::with_guards(lambda, beta, amps, guarded))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_reference_point_and_closed_form() {
        assert_eq!(
            action_s0(outer_turning_point(0.3), 0.3).unwrap().norm(),
            0.0
        );
        for (y, b) in [
            (0.0, 0.5),
            (0.7, 0.5),
            (1.1, -0.2),
            (0.3, 0.99),
            (1.3, 0.5),
            (2.0, 0.9961),
        ] {
            let q = action_s0(y, b).unwrap();
            let c = action_s0_closed_form(y, b).unwrap();
            assert!((q - c).norm() < 1e-10, "y={y} b={b}: {q} vs {c}");
        }
        assert!(action_s0(1.5, 0.5).unwrap().im > 0.0);
    }

    #[test]
    fn separatrix_half_well_action() {
        // |S_0(y_+, 0, 1)| = 2 sqrt2 E(pi/2 | 1) = 2 sqrt2
        assert!((half_well_action(1.0).unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn action_derivative_is_phase_momentum() {
        let b = 0.4;
        for y in [0.2, 0.6, 1.0] {
            let h = 1e-5;
            let d = (action_s0(y + h, b).unwrap().re - action_s0(y - h, b).unwrap().re) / (2.0 * h);
            let p = momenta(y, b).unwrap().p2;
            assert!((d - p).abs() < 1e-6 * p);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(action_s0(0.5, -1.5).is_err());
        assert!(action_s0(0.05, 1.01).is_err());
        assert!(normalization_constant(100.0, 1.0).is_err());
    }

    #[test]
    fn normalization_scaling() {
        let a = normalization_constant(100.0, 0.2).unwrap();
        let b = normalization_constant(400.0, 0.2).unwrap();
        assert!((b / a - 0.5f64.sqrt()).abs() < 1e-14);
        let e = normalization_constant(100.0, -1.0 + 1e-12).unwrap();
        assert!(
            (e * e - std::f64::consts::SQRT_2 / (10.0 * std::f64::consts::FRAC_PI_2)).abs() < 1e-9
        );
    }

    #[test]
    fn j_max_values() {
        assert_eq!(j_max(12500.0), 200);
        assert_eq!(j_max(250000.0), 899);
        assert_eq!(j_max(1e-4), 0);
    }
}
