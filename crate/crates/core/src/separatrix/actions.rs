//! Barred actions, the barrier parameter t and the phase angle mu on both sides of the
//! separatrix, and the continuous phase count Q(beta) built from them.

use crate::error::{Error, Result};
use crate::numerics::{
    brent, integrate, integrate_sqrt_ends, integrate_sqrt_lower, integrate_sqrt_upper,
};
use crate::specialfn::{ellip_e_imag_amplitude, ellip_e_inc, gamma_quarter_line};
use crate::wkb_core::{acos_c, acosh_c, half_well_action, outer_turning_point, ACTION_TOL};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, LN_2, PI};

/// Largest imaginary part tolerated when a closed form is expected to be real.
pub(crate) const LEAK_TOL: f64 = 1e-9;

fn need_underdense(beta: f64) -> Result<()> {
    if !(beta > -1.0 && beta < 1.0) {
        return Err(Error::Domain(format!(
            "underdense barrier needs -1 < beta < 1, got {beta}"
        )));
    }
    Ok(())
}

fn need_overdense(beta: f64) -> Result<()> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "overdense barrier needs beta > 1, got {beta}"
        )));
    }
    Ok(())
}

/// Quadrature form of S̄_0(0, y, beta) = int_0^y arccos(beta - u^2) du, 0 <= y <= y_+.
pub fn barred_action_underdense_quad(y: f64, beta: f64) -> Result<f64> {
    need_underdense(beta)?;
    let yp = outer_turning_point(beta);
    if !(0.0..=yp).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, {yp}]")));
    }
    if yp - y < 1e-3 * yp {
        integrate_sqrt_upper(|u| acos_c(beta - u * u), 0.0, y, ACTION_TOL)
    } else {
        integrate(|u| acos_c(beta - u * u), 0.0, y, ACTION_TOL, ACTION_TOL)
    }
}

/// Closed form `y arccos(beta - y^2) + 2i sqrt(1-beta) [E(a/2 | m) - E(a0/2 | m)]` with
/// a = arccos(beta - y^2), a0 = arccos(beta), m = 2/(1-beta) > 1.
///
/// Both elliptic values sit past the branch point of the integrand, so their difference is
/// purely imaginary and the whole expression real.
pub fn barred_action_underdense_closed(y: f64, beta: f64) -> Result<f64> {
    need_underdense(beta)?;
    let m = 2.0 / (1.0 - beta);
    let a = acos_c(beta - y * y);
    let diff = ellip_e_inc(0.5 * a, m)? - ellip_e_inc(0.5 * beta.acos(), m)?;
    let i2 = num_complex::Complex64::new(0.0, 2.0 * (1.0 - beta).sqrt());
    let v = i2 * diff + y * a;
    if v.im.abs() > LEAK_TOL * v.re.abs().max(1e-3) {
        return Err(Error::Convergence(format!(
            "barred action picked up imaginary part {}",
            v.im
        )));
    }
    Ok(v.re)
}

/// S̄_0(0, y, beta): the closed form when it evaluates cleanly, quadrature otherwise.
pub fn barred_action_underdense(y: f64, beta: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    let yp = outer_turning_point(beta);
    if y > yp {
        return Err(Error::Domain(format!(
            "y = {y} beyond the outer turning point {yp}"
        )));
    }
    match barred_action_underdense_closed(y, beta) {
        Ok(v) if v.is_finite() => Ok(v),
        _ => barred_action_underdense_quad(y, beta),
    }
}

/// int_0^{sqrt(1-beta)} arccos(beta + v^2) dv, the underdense barrier integral.
pub fn barrier_integral_underdense(beta: f64) -> Result<f64> {
    need_underdense(beta)?;
    integrate_sqrt_upper(
        |v| acos_c(beta + v * v),
        0.0,
        (1.0 - beta).sqrt(),
        ACTION_TOL,
    )
}

/// Closed form of the underdense barrier integral, 2 sqrt(1-beta) E(arccos(beta)/2 | 2/(1-beta)).
pub fn barrier_integral_underdense_closed(beta: f64) -> Result<f64> {
    need_underdense(beta)?;
    let e = ellip_e_inc(0.5 * beta.acos(), 2.0 / (1.0 - beta))?;
    Ok(2.0 * (1.0 - beta).sqrt() * e.re)
}

/// t = 4 sqrt(Lambda) I_u(beta) / pi for beta < 1.
pub fn t_underdense(lambda: f64, beta: f64) -> Result<f64> {
    Ok(4.0 * lambda.sqrt() * barrier_integral_underdense(beta)? / PI)
}

fn t_ln_t(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// mu = (t/4) ln t - (t/2) ln 2 - t/4 - Arg Gamma(1/4 + it/4) - pi/8, continuous argument.
pub fn mu_underdense(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("mu needs t >= 0, got {t}")));
    }
    let g = gamma_quarter_line(t);
    Ok(0.25 * t_ln_t(t) - 0.5 * t * LN_2 - 0.25 * t - g.argument - FRAC_PI_8)
}

/// mu = -(t/4) ln t + (t/2) ln 2 + t/4 + Arg Gamma(1/4 + it/4) - pi/8.
pub fn mu_overdense(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("mu needs t >= 0, got {t}")));
    }
    let g = gamma_quarter_line(t);
    Ok(-0.25 * t_ln_t(t) + 0.5 * t * LN_2 + 0.25 * t + g.argument - FRAC_PI_8)
}

/// Inner turning point sqrt(beta - 1) of the overdense barrier.
pub fn inner_turning_point(beta: f64) -> f64 {
    (beta - 1.0).abs().sqrt()
}

/// int_0^{sqrt(beta-1)} arccosh(beta - u^2) du, the overdense barrier integral.
pub fn barrier_integral_overdense(beta: f64) -> Result<f64> {
    need_overdense(beta)?;
    integrate_sqrt_upper(
        |u| acosh_c(beta - u * u),
        0.0,
        inner_turning_point(beta),
        ACTION_TOL,
    )
}

/// Closed form 2 sqrt(beta-1) int_0^{arccosh(beta)/2} sqrt(1 - 2 sinh^2 s/(beta-1)) ds,
/// the imaginary-amplitude elliptic integral at parameter 2/(1-beta) < 0.
pub fn barrier_integral_overdense_closed(beta: f64) -> Result<f64> {
    need_overdense(beta)?;
    let e = ellip_e_imag_amplitude(0.5 * beta.acosh(), 2.0 / (1.0 - beta))?;
    Ok(2.0 * (beta - 1.0).sqrt() * e.im)
}

/// t = 4 sqrt(Lambda) I_o(beta) / pi for beta > 1.
pub fn t_overdense(lambda: f64, beta: f64) -> Result<f64> {
    Ok(4.0 * lambda.sqrt() * barrier_integral_overdense(beta)? / PI)
}

/// S̄_0(sqrt(beta-1), y, beta) inside the barrier, = int_y^{sqrt(beta-1)} arccosh(beta - u^2) du.
pub fn barred_action_overdense_inside(y: f64, beta: f64) -> Result<f64> {
    need_overdense(beta)?;
    let yi = inner_turning_point(beta);
    if !(0.0..=yi).contains(&y) {
        return Err(Error::Domain(format!(
            "y = {y} outside the barrier [0, {yi}]"
        )));
    }
    integrate_sqrt_upper(|u| acosh_c(beta - u * u), y, yi, ACTION_TOL)
}

/// S̄_0(sqrt(beta-1), y, beta) outside the barrier, = int_{sqrt(beta-1)}^y (pi - arccos(u^2 - beta)) du.
pub fn barred_action_overdense_outside(y: f64, beta: f64) -> Result<f64> {
    need_overdense(beta)?;
    let yi = inner_turning_point(beta);
    let yp = outer_turning_point(beta);
    if !(yi..=yp).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [{yi}, {yp}]")));
    }
    integrate_sqrt_lower(|u| PI - acos_c(u * u - beta), yi, y, ACTION_TOL)
}

/// Closed form of the outside action:
/// `pi y - y arccos(x) + 2 sqrt(1+beta) [E(arccos(x)/2 | m) - E(m)]`, x = y^2 - beta, m = 2/(1+beta).
pub fn barred_action_overdense_outside_closed(y: f64, beta: f64) -> Result<f64> {
    need_overdense(beta)?;
    let m = 2.0 / (1.0 + beta);
    let a = acos_c(y * y - beta);
    let e = ellip_e_inc(0.5 * a, m)?.re - ellip_e_inc(FRAC_PI_2, m)?.re;
    Ok(PI * y - y * a + 2.0 * (1.0 + beta).sqrt() * e)
}

/// int_{sqrt(beta-1)}^{sqrt(beta+1)} arccos(u^2 - beta) du.
fn overdense_well_action(beta: f64) -> Result<f64> {
    integrate_sqrt_ends(
        |u| acos_c(u * u - beta),
        inner_turning_point(beta),
        outer_turning_point(beta),
        ACTION_TOL,
    )
}

/// Continuous phase count Q(beta).
///
/// Below the separatrix `Q = (sqrt(Lambda) |S_0(y_+, 0)| - mu_u) / (pi/2) - 1/2`; above it
/// the half-well action is replaced by `pi sqrt(beta-1) + int_{yi}^{y_+} arccos` and mu_u by
/// mu_o. The matching conditions hold exactly where Q is an even integer j, the offset
/// pi/4 or 5pi/4 following the parity of j/2. Q is continuous through beta = 1.
pub fn phase_count(lambda: f64, beta: f64) -> Result<f64> {
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "phase count undefined at beta = {beta}"
        )));
    }
    let sl = lambda.sqrt();
    let phase = if beta < 1.0 {
        sl * half_well_action(beta)? - mu_underdense(t_underdense(lambda, beta)?)?
    } else if beta == 1.0 {
        sl * half_well_action(beta)? + FRAC_PI_8
    } else {
        let w = PI * inner_turning_point(beta) + overdense_well_action(beta)?;
        sl * w - mu_overdense(t_overdense(lambda, beta)?)?
    };
    Ok(phase / FRAC_PI_2 - 0.5)
}

/// beta with Q(beta) = q.
pub fn phase_count_level(lambda: f64, q: f64) -> Result<f64> {
    if !(lambda > 0.0) || !q.is_finite() || q < -0.5 {
        return Err(Error::Domain(format!(
            "invalid Lambda = {lambda} or level {q}"
        )));
    }
    let f = |b: f64| phase_count(lambda, b).unwrap_or(f64::NAN) - q;
    let lo = -1.0 + 1e-14;
    if f(lo) > 0.0 {
        return Ok(lo);
    }
    let mut hi = 1.0;
    let mut step = 1.0 / lambda.sqrt();
    while f(hi) < 0.0 {
        hi += step;
        step *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoRoot(format!("no phase-count level {q}")));
        }
    }
    brent(f, lo, hi, 1e-14)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn underdense_closed_form_matches_quadrature() {
        for (y, b) in [
            (0.5, 0.9961),
            (0.1, 0.9961),
            (1.2, 0.95),
            (1.41, 0.99),
            (0.9, 0.3),
        ] {
            let q = barred_action_underdense_quad(y, b).unwrap();
            let c = barred_action_underdense_closed(y, b).unwrap();
            assert!((q - c).abs() < 1e-10, "y={y} b={b}: {q} vs {c}");
        }
        assert_eq!(barred_action_underdense(0.0, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn underdense_action_derivative() {
        let b = 0.9961;
        for y in [0.2, 0.8, 1.3] {
            let h = 1e-5;
            let d = (barred_action_underdense(y + h, b).unwrap()
                - barred_action_underdense(y - h, b).unwrap())
                / (2.0 * h);
            assert!((d - acos_c(b - y * y)).abs() < 1e-7);
        }
    }

    #[test]
    fn barrier_integrals_closed_forms() {
        for b in [0.3, 0.9, 0.9961, 0.99999] {
            let q = barrier_integral_underdense(b).unwrap();
            let c = barrier_integral_underdense_closed(b).unwrap();
            assert!((q - c).abs() < 1e-10 * q.max(1e-6), "b={b}: {q} vs {c}");
        }
        for b in [1.00001, 1.003358, 1.2, 3.0] {
            let q = barrier_integral_overdense(b).unwrap();
            let c = barrier_integral_overdense_closed(b).unwrap();
            assert!((q - c).abs() < 1e-10 * q.max(1e-6), "b={b}: {q} vs {c}");
        }
    }

    #[test]
    fn t_limits_and_scaling() {
        assert!(t_underdense(12500.0, 1.0 - 1e-12).unwrap() < 1e-6);
        assert!(t_overdense(12500.0, 1.0 + 1e-12).unwrap() < 1e-6);
        let r = t_underdense(4.0 * 12500.0, 0.9).unwrap() / t_underdense(12500.0, 0.9).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!(t_overdense(12500.0, 0.9).is_err());
    }

    #[test]
    fn mu_limits_and_derivative() {
        assert!((mu_underdense(0.0).unwrap() + FRAC_PI_8).abs() < 1e-15);
        assert!((mu_overdense(1e-12).unwrap() + FRAC_PI_8).abs() < 1e-10);
        // term-wise: d/dt of (t/4) ln t - (t/2) ln 2 - t/4 is ln(t)/4 - ln(2)/2
        let t = 4.0;
        let h = 1e-4;
        let fd = (mu_underdense(t + h).unwrap() - mu_underdense(t - h).unwrap()) / (2.0 * h);
        let darg =
            (gamma_quarter_line(t + h).argument - gamma_quarter_line(t - h).argument) / (2.0 * h);
        let analytic = 0.25 * t.ln() - 0.5 * LN_2 - darg;
        assert!((fd - analytic).abs() < 1e-6);
    }

    #[test]
    fn mu_identity_between_regimes() {
        // every t- and Gamma-dependent term flips sign, leaving mu_o + mu_u = -pi/4
        for t in [0.3, 4.0, 37.0, 900.0] {
            let sum = mu_overdense(t).unwrap() + mu_underdense(t).unwrap();
            assert!((sum + 0.25 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn overdense_actions() {
        let b = 1.012;
        let yi = inner_turning_point(b);
        for y in [yi + 0.01, 0.7, 1.4] {
            let q = barred_action_overdense_outside(y, b).unwrap();
            let c = barred_action_overdense_outside_closed(y, b).unwrap();
            assert!((q - c).abs() < 1e-10, "y={y}: {q} vs {c}");
        }
        assert!(barred_action_overdense_inside(0.0, b).unwrap() > 0.0);
        assert_eq!(barred_action_overdense_inside(yi, b).unwrap(), 0.0);
        assert!(barred_action_overdense_inside(0.5, b).is_err());
    }

    #[test]
    fn phase_count_is_continuous_and_increasing() {
        let l = 12500.0;
        let below = phase_count(l, 1.0 - 1e-10).unwrap();
        let at = phase_count(l, 1.0).unwrap();
        let above = phase_count(l, 1.0 + 1e-10).unwrap();
        assert!((below - at).abs() < 1e-3 && (above - at).abs() < 1e-3);
        let mut prev = phase_count(l, -0.99).unwrap();
        for k in 1..60 {
            let b = -0.99 + k as f64 * 0.035;
            let q = phase_count(l, b).unwrap();
            assert!(q > prev, "not increasing at {b}");
            prev = q;
        }
        let b = phase_count_level(l, 150.0).unwrap();
        assert!((phase_count(l, b).unwrap() - 150.0).abs() < 1e-9);
    }
}
